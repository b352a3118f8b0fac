//! Command-line front end. Every subcommand prints a JSON
//! [`CommandResult`] (keys sorted, rationals as `"p/q"`), or CSV for the
//! scan-type commands when asked.
//!
//! Exit codes: 0 success, 1 domain error (JSON error object on stdout),
//! 2 invalid arguments (usage on stderr).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curve::{arithmetic_genus, mk_slope, NodalCurve, Polarization};
use crate::error::Error;
use crate::exact::Rational;
use crate::feasibility::{feasible_interval, region_scan, IntRange};
use crate::gluing::{glued_class, GluingDatum, RationalMatrix};
use crate::moduli::{
    component_dimension, enumerate_components, fixed_det_fiber_dimension,
    projective_bundle_dimension,
};
use crate::stability::{check_sufficiency, mk_semistable_test, StabilityHypotheses};

pub const MAX_CELLS_VAR: &str = "NODAL_MODULI_MAX_CELLS";
pub const DEFAULT_MAX_CELLS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandResult {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Value,
    pub warnings: Vec<String>,
}

#[derive(Parser, Debug)]
#[command(
    name = "nodal-moduli",
    version,
    about = "Polarization feasibility and moduli invariants for glued sheaves on a two-component nodal curve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact interval of admissible w1 for a gluing datum.
    Feasible(FeasibleArgs),
    /// Tabulate feasibility over a box of (chi1, chi2).
    Region(RegionArgs),
    /// Enumerate components of U_C(w, r, chi).
    Components(ComponentsArgs),
    /// Invariants of the sheaf glued along a fiber matrix.
    Glue(GlueArgs),
    /// Search for subsheaves violating the sufficiency bound.
    CheckSufficiency(SufficiencyArgs),
    /// Dimension formulas for the components and related spaces.
    Dims(DimsArgs),
    /// Single (m,k)-slope comparison.
    MkTest(MkArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct FeasibleArgs {
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, allow_hyphen_values = true)]
    chi1: i64,
    #[arg(long, allow_hyphen_values = true)]
    chi2: i64,
    /// JSON output (the default; accepted for scripts).
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    /// Inclusive range lo:hi
    #[arg(long, allow_hyphen_values = true)]
    chi1: IntRange,
    /// Inclusive range lo:hi
    #[arg(long, allow_hyphen_values = true)]
    chi2: IntRange,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct ComponentsArgs {
    #[arg(long, allow_hyphen_values = true)]
    g1: i64,
    #[arg(long, allow_hyphen_values = true)]
    g2: i64,
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
    /// Weight on the first component, as p/q
    #[arg(long, allow_hyphen_values = true)]
    w1: Rational,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct GlueArgs {
    /// JSON array of rows with "p/q" entries
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    chi1: i64,
    #[arg(long, allow_hyphen_values = true)]
    chi2: i64,
}

#[derive(Args, Debug)]
struct SufficiencyArgs {
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, allow_hyphen_values = true)]
    chi1: i64,
    #[arg(long, allow_hyphen_values = true)]
    chi2: i64,
    #[arg(long, allow_hyphen_values = true)]
    g1: i64,
    #[arg(long, allow_hyphen_values = true)]
    g2: i64,
    /// Defaults to the sample point of the feasible interval
    #[arg(long, allow_hyphen_values = true)]
    w1: Option<Rational>,
    /// Assume both restrictions stable and test strict inequalities
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct DimsArgs {
    #[arg(long, allow_hyphen_values = true)]
    g1: i64,
    #[arg(long, allow_hyphen_values = true)]
    g2: i64,
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
}

#[derive(Args, Debug)]
struct MkArgs {
    #[arg(long, allow_hyphen_values = true)]
    sub_d: i64,
    #[arg(long, allow_hyphen_values = true)]
    sub_rk: i64,
    #[arg(long, allow_hyphen_values = true)]
    amb_d: i64,
    #[arg(long, allow_hyphen_values = true)]
    amb_rk: i64,
    #[arg(long, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long)]
    strict: bool,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

enum Output {
    Json(CommandResult),
    Csv { text: String, warnings: Vec<String> },
}

/// Runs the CLI on `argv` (program name first).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    let name = command_name(&cli.command);
    match dispatch(cli.command) {
        Ok(Output::Json(res)) => {
            let _ = writeln!(out, "{}", to_json(&res));
            0
        }
        Ok(Output::Csv { text, warnings }) => {
            for w in warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let _ = write!(out, "{text}");
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Domain(e)) => {
            let body = json!({
                "command": name,
                "error": { "kind": error_kind(&e), "message": e.to_string() },
            });
            let _ = writeln!(out, "{}", canonical_string(&body));
            1
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Feasible(_) => "feasible",
        Command::Region(_) => "region",
        Command::Components(_) => "components",
        Command::Glue(_) => "glue",
        Command::CheckSufficiency(_) => "check-sufficiency",
        Command::Dims(_) => "dims",
        Command::MkTest(_) => "mk-test",
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "division_by_zero",
        Error::ParseRational(_) => "parse_rational",
        Error::Overflow(_) => "overflow",
        Error::InvalidPolarization { .. } => "invalid_polarization",
        Error::InvalidCurve { .. } => "invalid_curve",
        Error::ZeroRank => "zero_rank",
        Error::NegativeRank(_) => "negative_rank",
        Error::RankOutOfRange(..) => "rank_out_of_range",
        Error::GluingRankOutOfRange { .. } => "gluing_rank_out_of_range",
        Error::GenusOutOfRange(_) => "genus_out_of_range",
        Error::NonSquareMatrix { .. } => "non_square_matrix",
        Error::EmptyMatrix => "empty_matrix",
        Error::RankMismatch { .. } => "rank_mismatch",
        Error::InvalidShape { .. } => "invalid_shape",
        Error::NecessaryConditionViolated(_) => "necessary_condition_violated",
        Error::SubrankOutOfRange { .. } => "subrank_out_of_range",
        Error::ScanTooLarge { .. } => "scan_too_large",
    }
}

/// Rebuilds every object with keys inserted in sorted order, so the
/// output does not depend on serde_json's map implementation.
fn canonical(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = serde_json::Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

fn canonical_string(v: &Value) -> String {
    serde_json::to_string_pretty(&canonical(v)).expect("JSON values always serialize")
}

fn to_json(res: &CommandResult) -> String {
    canonical_string(&serde_json::to_value(res).expect("CommandResult serializes"))
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn inputs(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn max_cells() -> Result<u128, Failure> {
    match std::env::var(MAX_CELLS_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{MAX_CELLS_VAR}={s:?} is not a nonnegative integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_CELLS),
    }
}

fn dispatch(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Feasible(a) => {
            let rep = feasible_interval(a.r, a.k, a.chi1, a.chi2)?;
            let mut outputs = value(&rep);
            let interval = if rep.feasible {
                json!([
                    rep.w1_interval.lower().map(|x| x.to_string()),
                    rep.w1_interval.upper().map(|x| x.to_string()),
                ])
            } else {
                Value::Null
            };
            outputs["interval"] = interval;
            Ok(Output::Json(CommandResult {
                command: "feasible".into(),
                inputs: inputs(&[
                    ("r", a.r.to_string()),
                    ("k", a.k.to_string()),
                    ("chi1", a.chi1.to_string()),
                    ("chi2", a.chi2.to_string()),
                ]),
                outputs,
                warnings: vec![],
            }))
        }
        Command::Region(a) => {
            let cells = u128::from(a.chi1.len()) * u128::from(a.chi2.len());
            let cap = max_cells()?;
            if cells > cap {
                return Err(Error::ScanTooLarge { cells, cap }.into());
            }
            let rows = region_scan(a.r, a.k, a.chi1, a.chi2)?;
            match a.format {
                Format::Csv => {
                    let mut text = String::from("chi1,chi2,feasible,w1_lo,w1_hi\n");
                    for row in &rows {
                        let end = |x: Option<&Rational>| {
                            if row.feasible {
                                x.map(|v| v.to_string()).unwrap_or_default()
                            } else {
                                String::new()
                            }
                        };
                        text.push_str(&format!(
                            "{},{},{},{},{}\n",
                            row.chi1,
                            row.chi2,
                            row.feasible,
                            end(row.w1_interval.lower()),
                            end(row.w1_interval.upper()),
                        ));
                    }
                    Ok(Output::Csv {
                        text,
                        warnings: vec![],
                    })
                }
                Format::Json => Ok(Output::Json(CommandResult {
                    command: "region".into(),
                    inputs: inputs(&[
                        ("r", a.r.to_string()),
                        ("k", a.k.to_string()),
                        ("chi1", a.chi1.to_string()),
                        ("chi2", a.chi2.to_string()),
                    ]),
                    outputs: json!({ "rows": value(&rows) }),
                    warnings: vec![],
                })),
            }
        }
        Command::Components(a) => {
            let c = NodalCurve::new(a.g1, a.g2)?;
            let w = Polarization::from_w1(a.w1.clone())?;
            let e = enumerate_components(&c, a.r, a.chi, &w)?;
            match a.format {
                Format::Csv => {
                    let mut text = String::from("chi1,chi2,d1,d2,dimension\n");
                    for rec in &e.records {
                        text.push_str(&format!(
                            "{},{},{},{},{}\n",
                            rec.chi1, rec.chi2, rec.d1, rec.d2, rec.dimension
                        ));
                    }
                    Ok(Output::Csv {
                        text,
                        warnings: e.warnings,
                    })
                }
                Format::Json => Ok(Output::Json(CommandResult {
                    command: "components".into(),
                    inputs: inputs(&[
                        ("g1", a.g1.to_string()),
                        ("g2", a.g2.to_string()),
                        ("r", a.r.to_string()),
                        ("chi", a.chi.to_string()),
                        ("w1", a.w1.to_string()),
                    ]),
                    outputs: value(&e),
                    warnings: e.warnings.clone(),
                })),
            }
        }
        Command::Glue(a) => {
            let text = std::fs::read_to_string(&a.matrix).map_err(|e| {
                Failure::Usage(format!("cannot read --matrix {}: {e}", a.matrix.display()))
            })?;
            let sigma: RationalMatrix = serde_json::from_str(&text).map_err(|e| {
                Failure::Usage(format!("invalid --matrix {}: {e}", a.matrix.display()))
            })?;
            let u = GluingDatum::from_matrix(sigma, a.chi1, a.chi2)?;
            let g = glued_class(&u)?;
            let mut outputs = value(&g);
            outputs["chi"] = json!(g.class.chi);
            outputs["r"] = json!(u.r());
            outputs["k"] = json!(u.k());
            Ok(Output::Json(CommandResult {
                command: "glue".into(),
                inputs: inputs(&[
                    ("matrix", a.matrix.display().to_string()),
                    ("chi1", a.chi1.to_string()),
                    ("chi2", a.chi2.to_string()),
                ]),
                outputs,
                warnings: vec![],
            }))
        }
        Command::CheckSufficiency(a) => {
            let h = StabilityHypotheses::new(a.r, a.k, a.chi1, a.chi2, a.g1, a.g2)?;
            let w = match &a.w1 {
                Some(w1) => Polarization::from_w1(w1.clone())?,
                None => feasible_interval(a.r, a.k, a.chi1, a.chi2)?
                    .sample
                    .ok_or_else(|| {
                        Error::NecessaryConditionViolated(
                            "no polarization satisfies the necessary conditions".into(),
                        )
                    })?,
            };
            let verdict = check_sufficiency(&h, &w, a.strict)?;
            let mut warnings = Vec::new();
            if a.k == a.r {
                warnings.push("k = r: the glued sheaf is locally free".to_string());
            }
            let mut outputs = value(&verdict);
            outputs["w"] = value(&w);
            outputs["hypotheses"] = value(&h);
            let mut inp = vec![
                ("r", a.r.to_string()),
                ("k", a.k.to_string()),
                ("chi1", a.chi1.to_string()),
                ("chi2", a.chi2.to_string()),
                ("g1", a.g1.to_string()),
                ("g2", a.g2.to_string()),
                ("strict", a.strict.to_string()),
            ];
            if let Some(w1) = &a.w1 {
                inp.push(("w1", w1.to_string()));
            }
            Ok(Output::Json(CommandResult {
                command: "check-sufficiency".into(),
                inputs: inputs(&inp),
                outputs,
                warnings,
            }))
        }
        Command::Dims(a) => {
            let c = NodalCurve::new(a.g1, a.g2)?;
            let outputs = json!({
                "arithmetic_genus": arithmetic_genus(&c)?,
                "component": component_dimension(&c, a.r)?,
                "pf_bundle": projective_bundle_dimension(&c, a.r)?,
                "fixed_det_fiber": fixed_det_fiber_dimension(&c, a.r)?,
            });
            Ok(Output::Json(CommandResult {
                command: "dims".into(),
                inputs: inputs(&[
                    ("g1", a.g1.to_string()),
                    ("g2", a.g2.to_string()),
                    ("r", a.r.to_string()),
                ]),
                outputs,
                warnings: vec![],
            }))
        }
        Command::MkTest(a) => {
            let holds =
                mk_semistable_test((a.sub_d, a.sub_rk), (a.amb_d, a.amb_rk), a.m, a.k, a.strict)?;
            let shift = a.m.checked_sub(a.k).ok_or(Error::Overflow("m - k"))?;
            let outputs = json!({
                "holds": holds,
                "sub_slope": mk_slope(a.sub_d, a.sub_rk, a.m)?,
                "amb_slope": mk_slope(a.amb_d, a.amb_rk, shift)?,
            });
            Ok(Output::Json(CommandResult {
                command: "mk-test".into(),
                inputs: inputs(&[
                    ("sub_d", a.sub_d.to_string()),
                    ("sub_rk", a.sub_rk.to_string()),
                    ("amb_d", a.amb_d.to_string()),
                    ("amb_rk", a.amb_rk.to_string()),
                    ("m", a.m.to_string()),
                    ("k", a.k.to_string()),
                    ("strict", a.strict.to_string()),
                ]),
                outputs,
                warnings: vec![],
            }))
        }
    }
}
