//! Existence and exact computation of polarizations satisfying the
//! necessary semistability conditions of a glued sheaf.
//!
//! For `χ = χ₁ + χ₂ − r` the conditions on `w = (w1, w2)` are
//!
//! ```text
//! χ·w1         ≤ χ₁ ≤ χ·w1 + k
//! χ·w2 + r − k ≤ χ₂ ≤ χ·w2 + r
//! ```
//!
//! Eliminating `w2 = 1 − w1` the second line is equivalent to the first, so
//! the admissible `w1` form a closed interval (all of ℚ when `χ = 0` and the
//! integer test `0 ≤ χ₁ ≤ k` passes), which is then cut down to `(0, 1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::Polarization;
use crate::error::Result;
use crate::exact::{Rational, RationalInterval};
use crate::gluing::{glued_chi, validate_rank_pair, GluingDatum};
use crate::par::Execution;

/// One of the four inequalities, named by the bound it imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NecessaryCondition {
    Chi1Lower,
    Chi1Upper,
    Chi2Lower,
    Chi2Upper,
}

impl fmt::Display for NecessaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NecessaryCondition::Chi1Lower => "chi*w1 <= chi1",
            NecessaryCondition::Chi1Upper => "chi1 <= chi*w1 + k",
            NecessaryCondition::Chi2Lower => "chi*w2 + r - k <= chi2",
            NecessaryCondition::Chi2Upper => "chi2 <= chi*w2 + r",
        })
    }
}

/// First violated inequality, in the order listed above, or `None`.
pub fn violated_condition(
    r: i64,
    k: i64,
    chi1: i64,
    chi2: i64,
    w: &Polarization,
) -> Result<Option<NecessaryCondition>> {
    let chi = Rational::from(glued_chi(r, chi1, chi2)?);
    let (r, k, x1, x2) = (
        Rational::from(r),
        Rational::from(k),
        Rational::from(chi1),
        Rational::from(chi2),
    );
    let cw1 = &chi * w.w1();
    let cw2 = &chi * w.w2();
    let checks = [
        (cw1 <= x1, NecessaryCondition::Chi1Lower),
        (x1 <= &cw1 + &k, NecessaryCondition::Chi1Upper),
        (&cw2 + &r - &k <= x2, NecessaryCondition::Chi2Lower),
        (x2 <= &cw2 + &r, NecessaryCondition::Chi2Upper),
    ];
    Ok(checks.into_iter().find(|(ok, _)| !ok).map(|(_, c)| c))
}

/// Whether `w` satisfies all four necessary conditions for `u`.
pub fn necessary_conditions(u: &GluingDatum, w: &Polarization) -> bool {
    matches!(
        violated_condition(u.r(), u.k(), u.chi1(), u.chi2(), w),
        Ok(None)
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub chi: i64,
    pub w1_interval: RationalInterval,
    pub sample: Option<Polarization>,
}

/// Admissible `w1` before intersecting with `(0, 1)`.
fn raw_w1_interval(k: i64, chi1: i64, chi: i64) -> RationalInterval {
    match chi.signum() {
        0 if (0..=k).contains(&chi1) => RationalInterval::everything(),
        0 => RationalInterval::empty(),
        _ => {
            let q = |n: i128| Rational::new(n, chi).expect("chi is nonzero");
            let a = q(i128::from(chi1) - i128::from(k));
            let b = q(i128::from(chi1));
            if chi > 0 {
                RationalInterval::closed(a, b)
            } else {
                RationalInterval::closed(b, a)
            }
        }
    }
}

fn report(chi: i64, w1_interval: RationalInterval) -> FeasibilityReport {
    let sample = w1_interval
        .sample()
        .map(|w1| Polarization::from_w1(w1).expect("sample lies in (0, 1)"));
    FeasibilityReport {
        feasible: sample.is_some(),
        chi,
        w1_interval,
        sample,
    }
}

/// Exact set of `w1 ∈ (0, 1)` satisfying the necessary conditions.
pub fn feasible_interval(r: i64, k: i64, chi1: i64, chi2: i64) -> Result<FeasibilityReport> {
    validate_rank_pair(r, k)?;
    let chi = glued_chi(r, chi1, chi2)?;
    let interval = raw_w1_interval(k, chi1, chi).intersect(&RationalInterval::unit_open());
    Ok(report(chi, interval))
}

/// Membership of `(χ₁, χ₂)` in the region of pairs admitting a polarization.
pub fn in_region(r: i64, k: i64, chi1: i64, chi2: i64) -> Result<bool> {
    Ok(feasible_interval(r, k, chi1, chi2)?.feasible)
}

/// Membership in the intersection of the regions over every `k = 1..=r`,
/// with the `w1` values that work for all `k` at once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllRanksReport {
    pub member: bool,
    pub chi: i64,
    pub w1_interval: RationalInterval,
    pub sample: Option<Polarization>,
}

pub fn in_region_all_k(r: i64, chi1: i64, chi2: i64) -> Result<AllRanksReport> {
    validate_rank_pair(r, 1)?;
    let mut common = RationalInterval::unit_open();
    let mut chi = 0;
    for k in 1..=r {
        let rep = feasible_interval(r, k, chi1, chi2)?;
        chi = rep.chi;
        common = common.intersect(&rep.w1_interval);
    }
    let rep = report(chi, common);
    Ok(AllRanksReport {
        member: in_region(r, 1, chi1, chi2)?,
        chi,
        w1_interval: rep.w1_interval,
        sample: rep.sample,
    })
}

/// Inclusive integer range, written `lo:hi`. Empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        IntRange { lo, hi }
    }

    pub fn len(&self) -> u64 {
        if self.lo > self.hi {
            0
        } else {
            self.hi.abs_diff(self.lo) + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad bound {t:?}: {e}"))
        };
        Ok(IntRange::new(parse(lo)?, parse(hi)?))
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRow {
    pub chi1: i64,
    pub chi2: i64,
    pub feasible: bool,
    pub w1_interval: RationalInterval,
}

/// Tabulates feasibility over a lattice box, `chi1` major, `chi2` minor.
pub fn region_scan(r: i64, k: i64, chi1: IntRange, chi2: IntRange) -> Result<Vec<RegionRow>> {
    region_scan_with(Execution::default(), r, k, chi1, chi2)
}

pub fn region_scan_with(
    exec: Execution,
    r: i64,
    k: i64,
    chi1: IntRange,
    chi2: IntRange,
) -> Result<Vec<RegionRow>> {
    validate_rank_pair(r, k)?;
    let points: Vec<(i64, i64)> = chi1
        .iter()
        .flat_map(|x1| chi2.iter().map(move |x2| (x1, x2)))
        .collect();
    exec.map(&points, |&(x1, x2)| {
        feasible_interval(r, k, x1, x2).map(|rep| RegionRow {
            chi1: x1,
            chi2: x2,
            feasible: rep.feasible,
            w1_interval: rep.w1_interval,
        })
    })
    .into_iter()
    .collect()
}
