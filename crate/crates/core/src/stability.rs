//! Sufficient conditions for `w`-(semi)stability of a glued sheaf, checked
//! over the discrete invariants of its subsheaves.
//!
//! A subsheaf `F ⊆ E_u` has multirank `(s1, s2)` and stalk
//! `O_p^s ⊕ O_{q₁}^{s1−s} ⊕ O_{q₂}^{s2−s}` at the node, with `0 ≤ s ≤ k`.
//! It sits in `0 → G₁ ⊕ G₂ → F → ℂ_p^s → 0` where `G_i` lies in the
//! canonical kernel `K_i`. Assuming `E₁` is `(0,k)`-semistable and `E₂` is
//! `(0,r)`-semistable bounds `deg G_i`; since the slope of `F` grows with
//! its Euler characteristic, testing the largest admissible degrees for
//! every shape `(s, s1, s2)` decides the whole family.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::curve::{chi_to_degree, mk_slope, polarized_slope, NodalCurve, Polarization};
use crate::error::{checked, Error, Result};
use crate::exact::Rational;
use crate::feasibility::violated_condition;
use crate::gluing::{glued_chi, glued_class, validate_rank_pair, GluingDatum};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub s: i64,
    pub s1: i64,
    pub s2: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsheafInvariant {
    pub s: i64,
    pub s1: i64,
    pub s2: i64,
    pub deg_g1: i64,
    pub deg_g2: i64,
}

impl SubsheafInvariant {
    pub fn shape(&self) -> Shape {
        Shape {
            s: self.s,
            s1: self.s1,
            s2: self.s2,
        }
    }
}

/// Gluing datum plus genera, with the degrees `d_i = χ_i − r(1 − g_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilityHypotheses {
    pub r: i64,
    pub k: i64,
    pub chi1: i64,
    pub chi2: i64,
    pub g1: i64,
    pub g2: i64,
    pub d1: i64,
    pub d2: i64,
}

impl StabilityHypotheses {
    pub fn new(r: i64, k: i64, chi1: i64, chi2: i64, g1: i64, g2: i64) -> Result<Self> {
        validate_rank_pair(r, k)?;
        NodalCurve::new(g1, g2)?;
        glued_chi(r, chi1, chi2)?;
        Ok(StabilityHypotheses {
            r,
            k,
            chi1,
            chi2,
            g1,
            g2,
            d1: chi_to_degree(chi1, r, g1)?,
            d2: chi_to_degree(chi2, r, g2)?,
        })
    }

    pub fn from_datum(u: &GluingDatum, c: &NodalCurve) -> Result<Self> {
        Self::new(u.r(), u.k(), u.chi1(), u.chi2(), c.g1(), c.g2())
    }

    pub fn datum(&self) -> Result<GluingDatum> {
        GluingDatum::new(self.r, self.k, self.chi1, self.chi2)
    }

    fn validate_shape(&self, sh: Shape) -> Result<()> {
        let ok = (0..=self.k).contains(&sh.s)
            && (sh.s..=self.r).contains(&sh.s1)
            && (sh.s..=self.r).contains(&sh.s2)
            && sh.s1 + sh.s2 > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidShape {
                s: sh.s,
                s1: sh.s1,
                s2: sh.s2,
                r: self.r,
                k: self.k,
            })
        }
    }

    /// Every admissible shape in lexicographic `(s, s1, s2)` order.
    pub fn shapes(&self, proper_only: bool) -> Vec<Shape> {
        let mut out = Vec::new();
        for s in 0..=self.k {
            for s1 in s..=self.r {
                for s2 in s..=self.r {
                    if s1 + s2 == 0 || (proper_only && s1 == self.r && s2 == self.r) {
                        continue;
                    }
                    out.push(Shape { s, s1, s2 });
                }
            }
        }
        out
    }
}

/// Which of the restrictions are assumed stable rather than semistable
/// (`E₁` in the `(0,k)` sense, `E₂` in the `(0,r)` sense).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Assumption {
    pub e1_stable: bool,
    pub e2_stable: bool,
}

impl Assumption {
    pub const SEMISTABLE: Assumption = Assumption {
        e1_stable: false,
        e2_stable: false,
    };
    pub const STABLE: Assumption = Assumption {
        e1_stable: true,
        e2_stable: true,
    };

    /// Any stability assumption asks for strict slope inequalities.
    pub fn is_strict(self) -> bool {
        self.e1_stable || self.e2_stable
    }
}

/// Largest admissible `deg G₁`, `deg G₂`; `None` on a side of rank zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBounds {
    pub g1: Option<i64>,
    pub g2: Option<i64>,
}

fn to_i64(x: num_bigint::BigInt, what: &'static str) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow(what))
}

fn side_bound(s_i: i64, numer: i64, r: i64, strict: bool) -> Result<Option<i64>> {
    if s_i == 0 {
        return Ok(None);
    }
    let bound = Rational::new(i128::from(s_i) * i128::from(numer), r)?;
    let b = if strict {
        bound.floor_strict()
    } else {
        bound.floor()
    };
    to_i64(b, "degree bound").map(Some)
}

/// `deg G₁ ≤ ⌊s1(d1 − k)/r⌋` and `deg G₂ ≤ ⌊s2(d2 − 2r)/r⌋`.
pub fn max_degree_bounds(shape: Shape, h: &StabilityHypotheses) -> Result<DegreeBounds> {
    degree_bounds(shape, h, Assumption::SEMISTABLE)
}

/// As [`max_degree_bounds`]; a stable side uses the largest integer
/// strictly below the rational bound.
pub fn degree_bounds(
    shape: Shape,
    h: &StabilityHypotheses,
    assumption: Assumption,
) -> Result<DegreeBounds> {
    if shape.s1 < 0 || shape.s2 < 0 {
        return Err(Error::NegativeRank(shape.s1.min(shape.s2)));
    }
    let n1 = checked("d1 - k", h.d1.checked_sub(h.k))?;
    let n2 = checked(
        "d2 - 2r",
        h.r.checked_mul(2).and_then(|two_r| h.d2.checked_sub(two_r)),
    )?;
    Ok(DegreeBounds {
        g1: side_bound(shape.s1, n1, h.r, assumption.e1_stable)?,
        g2: side_bound(shape.s2, n2, h.r, assumption.e2_stable)?,
    })
}

/// `χ(F) = deg G₁ + s1(1 − g1) + deg G₂ + s2(1 − g2) + s`.
fn subsheaf_chi(f: &SubsheafInvariant, h: &StabilityHypotheses) -> Rational {
    let big = Rational::from;
    big(f.deg_g1) + big(f.s1) * big(1 - h.g1) + big(f.deg_g2) + big(f.s2) * big(1 - h.g2) + big(f.s)
}

/// `μ_w(F) = χ(F) / (w1·s1 + w2·s2)`.
pub fn subsheaf_slope(
    f: &SubsheafInvariant,
    h: &StabilityHypotheses,
    w: &Polarization,
) -> Result<Rational> {
    if f.s1 < 0 || f.s2 < 0 {
        return Err(Error::NegativeRank(f.s1.min(f.s2)));
    }
    if f.s1 == 0 && f.s2 == 0 {
        return Err(Error::ZeroRank);
    }
    subsheaf_chi(f, h).checked_div(&w.weighted_rank(f.s1, f.s2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SufficiencyVerdict {
    pub holds: bool,
    pub strict: bool,
    pub ambient_slope: Rational,
    pub witness: Option<SubsheafInvariant>,
    pub shapes_checked: usize,
}

/// Semistable (`strict = false`) or stable (`strict = true`, both
/// restrictions assumed stable) check over extremal-degree subsheaves.
pub fn check_sufficiency(
    h: &StabilityHypotheses,
    w: &Polarization,
    strict: bool,
) -> Result<SufficiencyVerdict> {
    let assumption = if strict {
        Assumption::STABLE
    } else {
        Assumption::SEMISTABLE
    };
    check_sufficiency_under(h, w, assumption, Execution::default())
}

pub fn check_sufficiency_under(
    h: &StabilityHypotheses,
    w: &Polarization,
    assumption: Assumption,
    exec: Execution,
) -> Result<SufficiencyVerdict> {
    search(h, w, assumption, exec, 0)
}

/// Slow mode: every degree pair within `window` of the extremal one.
pub fn check_sufficiency_window(
    h: &StabilityHypotheses,
    w: &Polarization,
    assumption: Assumption,
    window: i64,
) -> Result<SufficiencyVerdict> {
    search(h, w, assumption, Execution::default(), window.max(0))
}

fn search(
    h: &StabilityHypotheses,
    w: &Polarization,
    assumption: Assumption,
    exec: Execution,
    window: i64,
) -> Result<SufficiencyVerdict> {
    if let Some(c) = violated_condition(h.r, h.k, h.chi1, h.chi2, w)? {
        return Err(Error::NecessaryConditionViolated(c.to_string()));
    }
    let strict = assumption.is_strict();
    let ambient = polarized_slope(&glued_class(&h.datum()?)?.class, w)?;
    let shapes = h.shapes(strict);

    let first_violation = |sh: &Shape| -> Result<Option<SubsheafInvariant>> {
        h.validate_shape(*sh)?;
        let b = degree_bounds(*sh, h, assumption)?;
        let range = |m: Option<i64>| match m {
            Some(m) => (m.saturating_sub(window), m),
            None => (0, 0),
        };
        let (lo1, hi1) = range(b.g1);
        let (lo2, hi2) = range(b.g2);
        for deg_g1 in (lo1..=hi1).rev() {
            for deg_g2 in (lo2..=hi2).rev() {
                let f = SubsheafInvariant {
                    s: sh.s,
                    s1: sh.s1,
                    s2: sh.s2,
                    deg_g1,
                    deg_g2,
                };
                let mu = subsheaf_slope(&f, h, w)?;
                let bad = if strict { mu >= ambient } else { mu > ambient };
                if bad {
                    return Ok(Some(f));
                }
            }
        }
        Ok(None)
    };

    let found = exec.find_map_first(&shapes, |sh| first_violation(sh).transpose());
    let witness = found.transpose()?;
    Ok(SufficiencyVerdict {
        holds: witness.is_none(),
        strict,
        ambient_slope: ambient,
        witness,
        shapes_checked: shapes.len(),
    })
}

/// `(m, k)`-test on one subsheaf: `μ_m(sub) ≤ μ_{m−k}(amb)` (`<` when strict).
/// Pairs are `(degree, rank)`.
pub fn mk_semistable_test(
    sub: (i64, i64),
    amb: (i64, i64),
    m: i64,
    k: i64,
    strict: bool,
) -> Result<bool> {
    let lhs = mk_slope(sub.0, sub.1, m)?;
    let shift = checked("m - k", m.checked_sub(k))?;
    let rhs = mk_slope(amb.0, amb.1, shift)?;
    Ok(if strict { lhs < rhs } else { lhs <= rhs })
}

/// Lower bound `s·((g − 1)(r − s) − r)` on the codimension of the locus of
/// stable bundles that fail to be `(0, r)`-stable through a rank-`s` subbundle.
pub fn nonstable_locus_codim_bound(r: i64, g: i64, s: i64) -> Result<i64> {
    if g < 1 {
        return Err(Error::GenusOutOfRange(g));
    }
    if s < 1 || s > r - 1 {
        return Err(Error::SubrankOutOfRange { s, max: r - 1 });
    }
    let v = (g - 1)
        .checked_mul(r - s)
        .and_then(|v| v.checked_sub(r))
        .and_then(|v| v.checked_mul(s));
    checked("codimension bound", v)
}

/// `g > r + 1`: the regime where the bound above is positive for all `s`.
pub fn open_stable_locus_hypothesis(r: i64, g: i64) -> bool {
    g > r + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical_subsheaves;
    use crate::feasibility::{feasible_interval, in_region};
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn slope_of_canonical_kernels() {
        let h = StabilityHypotheses::new(3, 2, 4, 5, 2, 3).unwrap();
        let w = Polarization::from_w1(q("2/5")).unwrap();
        let (k1, k2) = canonical_subsheaves(&h.datum().unwrap()).unwrap();
        let f1 = SubsheafInvariant {
            s: 0,
            s1: 3,
            s2: 0,
            deg_g1: h.d1 - h.k,
            deg_g2: 0,
        };
        assert_eq!(
            subsheaf_slope(&f1, &h, &w).unwrap(),
            polarized_slope(&k1, &w).unwrap()
        );
        let f2 = SubsheafInvariant {
            s: 0,
            s1: 0,
            s2: 3,
            deg_g1: 0,
            deg_g2: h.d2 - h.r,
        };
        assert_eq!(
            subsheaf_slope(&f2, &h, &w).unwrap(),
            polarized_slope(&k2, &w).unwrap()
        );
    }

    #[test]
    fn slope_genus_one() {
        let h = StabilityHypotheses::new(2, 1, 1, 1, 1, 1).unwrap();
        let f = SubsheafInvariant {
            s: 1,
            s1: 1,
            s2: 1,
            deg_g1: 0,
            deg_g2: 0,
        };
        assert_eq!(
            subsheaf_slope(&f, &h, &Polarization::balanced()),
            Ok(q("1"))
        );
        let zero = SubsheafInvariant {
            s1: 0,
            s2: 0,
            s: 0,
            ..f
        };
        assert_eq!(
            subsheaf_slope(&zero, &h, &Polarization::balanced()),
            Err(Error::ZeroRank)
        );
    }

    #[test]
    fn degree_bound_examples() {
        // r = 2, k = 1, d1 = 3 (chi1 = 1, g1 = 2); d2 = 7 (chi2 = 5, g2 = 2).
        let h = StabilityHypotheses::new(2, 1, 1, 5, 2, 2).unwrap();
        assert_eq!((h.d1, h.d2), (3, 7));
        let b = max_degree_bounds(Shape { s: 0, s1: 2, s2: 1 }, &h).unwrap();
        assert_eq!(
            b,
            DegreeBounds {
                g1: Some(2),
                g2: Some(1)
            }
        );
        let b = max_degree_bounds(Shape { s: 0, s1: 0, s2: 1 }, &h).unwrap();
        assert_eq!(b.g1, None);
        // 2·(3 − 1)/2 = 2 exactly, so the strict bound drops to 1; 3/2 is
        // not an integer and keeps floor 1.
        let b = degree_bounds(Shape { s: 0, s1: 2, s2: 1 }, &h, Assumption::STABLE).unwrap();
        assert_eq!(
            b,
            DegreeBounds {
                g1: Some(1),
                g2: Some(1)
            }
        );
    }

    #[test]
    fn sufficiency_examples() {
        let h = StabilityHypotheses::new(2, 1, 1, 2, 2, 2).unwrap();
        assert_eq!((h.d1, h.d2), (3, 4));
        let w = feasible_interval(2, 1, 1, 2).unwrap().sample.unwrap();
        let v = check_sufficiency(&h, &w, false).unwrap();
        assert!(v.holds);
        assert!(v.witness.is_none());
        assert!(v.shapes_checked <= 2 * 9);

        // feasible w1 for (2, 1, 2, 3) is [1/3, 2/3]
        let h = StabilityHypotheses::new(2, 1, 2, 3, 2, 2).unwrap();
        let bad = Polarization::from_w1(q("1/10")).unwrap();
        let err = check_sufficiency(&h, &bad, false).unwrap_err();
        assert!(matches!(err, Error::NecessaryConditionViolated(_)));
    }

    #[test]
    fn second_side_stability_alone_can_tie() {
        // χ = 0 and χ₁ = k: subsheaves of K₁ reach slope μ_w(E) = 0, so
        // assuming only E₂ stable leaves a tie on a shape with s2 = 0.
        let h = StabilityHypotheses::new(2, 1, 1, 1, 4, 4).unwrap();
        let w = feasible_interval(2, 1, 1, 1).unwrap().sample.unwrap();
        let only_e2 = Assumption {
            e1_stable: false,
            e2_stable: true,
        };
        let v = check_sufficiency_under(&h, &w, only_e2, Execution::Sequential).unwrap();
        assert!(!v.holds);
        let f = v.witness.unwrap();
        assert_eq!((f.s, f.s2), (0, 0));
        assert_eq!(subsheaf_slope(&f, &h, &w), Ok(Rational::zero()));
        let only_e1 = Assumption {
            e1_stable: true,
            e2_stable: false,
        };
        assert!(
            check_sufficiency_under(&h, &w, only_e1, Execution::Sequential)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn mk_examples() {
        assert_eq!(mk_semistable_test((1, 1), (3, 2), 0, 1, false), Ok(true));
        assert_eq!(mk_semistable_test((1, 1), (3, 2), 0, 1, true), Ok(false));
        assert_eq!(mk_semistable_test((0, 1), (3, 2), 0, 1, false), Ok(true));
        assert_eq!(mk_semistable_test((2, 1), (3, 2), 0, 2, false), Ok(false));
        assert_eq!(
            mk_semistable_test((2, 0), (3, 2), 0, 2, false),
            Err(Error::ZeroRank)
        );
    }

    #[test]
    fn codim_examples() {
        assert_eq!(nonstable_locus_codim_bound(2, 4, 1), Ok(1));
        assert_eq!(nonstable_locus_codim_bound(3, 5, 2), Ok(2));
        assert_eq!(nonstable_locus_codim_bound(2, 3, 1), Ok(0));
        assert!(!open_stable_locus_hypothesis(2, 3));
        assert!(nonstable_locus_codim_bound(3, 5, 3).is_err());
        assert!(nonstable_locus_codim_bound(3, 5, 0).is_err());
    }

    fn instance() -> impl Strategy<Value = (StabilityHypotheses, Polarization)> {
        (2i64..=4, 0i64..4, -8i64..=8, -8i64..=8, 1i64..=7, 1i64..=7).prop_filter_map(
            "outside region",
            |(r, ko, x1, x2, g1, g2)| {
                let k = 1 + ko % r;
                let w = feasible_interval(r, k, x1, x2).ok()?.sample?;
                Some((StabilityHypotheses::new(r, k, x1, x2, g1, g2).unwrap(), w))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn extremal_degrees_dominate((h, w) in instance()) {
            for sh in h.shapes(false) {
                let b = max_degree_bounds(sh, &h).unwrap();
                let top = SubsheafInvariant { s: sh.s, s1: sh.s1, s2: sh.s2, deg_g1: b.g1.unwrap_or(0), deg_g2: b.g2.unwrap_or(0) };
                let best = subsheaf_slope(&top, &h, &w).unwrap();
                let span = |m: Option<i64>| m.map_or(0..=0, |m| (m - 3)..=m);
                for d1 in span(b.g1) {
                    for d2 in span(b.g2) {
                        let f = SubsheafInvariant { deg_g1: d1, deg_g2: d2, ..top };
                        prop_assert!(subsheaf_slope(&f, &h, &w).unwrap() <= best);
                    }
                }
            }
        }

        #[test]
        fn window_mode_agrees((h, w) in instance(), strict in any::<bool>()) {
            let a = if strict { Assumption::STABLE } else { Assumption::SEMISTABLE };
            let fast = check_sufficiency_under(&h, &w, a, Execution::Sequential).unwrap();
            let slow = check_sufficiency_window(&h, &w, a, 3).unwrap();
            prop_assert_eq!(fast.holds, slow.holds);
        }

        #[test]
        fn parallel_matches_sequential((h, w) in instance(), strict in any::<bool>()) {
            let a = if strict { Assumption::STABLE } else { Assumption::SEMISTABLE };
            prop_assert_eq!(
                check_sufficiency_under(&h, &w, a, Execution::Sequential).unwrap(),
                check_sufficiency_under(&h, &w, a, Execution::Parallel).unwrap()
            );
        }

        #[test]
        fn torsion_excess_nonpositive(r in 2i64..=6, ko in 0i64..6) {
            let k = 1 + ko % r;
            let h = StabilityHypotheses::new(r, k, 0, r, 2, 2).unwrap();
            for sh in h.shapes(false) {
                prop_assert!(sh.s - sh.s2 <= 0);
            }
        }

        #[test]
        fn full_rank_never_has_witness(r in 2i64..=4, x1 in -8i64..=8, x2 in -8i64..=8, g1 in 1i64..=6, g2 in 1i64..=6) {
            prop_assume!(in_region(r, r, x1, x2).unwrap());
            let w = feasible_interval(r, r, x1, x2).unwrap().sample.unwrap();
            let h = StabilityHypotheses::new(r, r, x1, x2, g1, g2).unwrap();
            prop_assert!(check_sufficiency(&h, &w, false).unwrap().holds);
        }
    }

    #[test]
    fn codim_positive_beyond_threshold() {
        for r in 2..=6 {
            for g in r + 2..=r + 12 {
                for s in 1..r {
                    assert!(
                        nonstable_locus_codim_bound(r, g, s).unwrap() > 0,
                        "r={r} g={g} s={s}"
                    );
                }
            }
        }
    }
}
