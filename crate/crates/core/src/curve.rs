//! Discrete invariants of the nodal curve, its polarizations, and depth-one
//! sheaf classes.

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{checked, Error, Result};
use crate::exact::Rational;

/// Two smooth components `C₁`, `C₂` of genus `g1`, `g2` meeting in one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CurveRepr")]
pub struct NodalCurve {
    g1: i64,
    g2: i64,
}

#[derive(Deserialize)]
struct CurveRepr {
    g1: i64,
    g2: i64,
}

impl TryFrom<CurveRepr> for NodalCurve {
    type Error = Error;
    fn try_from(r: CurveRepr) -> Result<Self> {
        NodalCurve::new(r.g1, r.g2)
    }
}

impl NodalCurve {
    pub fn new(g1: i64, g2: i64) -> Result<Self> {
        if g1 < 1 || g2 < 1 {
            return Err(Error::InvalidCurve { g1, g2 });
        }
        Ok(NodalCurve { g1, g2 })
    }

    pub fn g1(&self) -> i64 {
        self.g1
    }

    pub fn g2(&self) -> i64 {
        self.g2
    }

    pub fn arithmetic_genus(&self) -> Result<i64> {
        arithmetic_genus(self)
    }
}

/// `p_a(C) = g₁ + g₂`.
pub fn arithmetic_genus(c: &NodalCurve) -> Result<i64> {
    checked("arithmetic genus", c.g1.checked_add(c.g2))
}

/// Rational weights `(w1, w2)` with `0 < w_i < 1` and `w1 + w2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Polarization {
    w1: Rational,
    w2: Rational,
}

impl Polarization {
    /// Rejects weights outside the open unit interval or not summing to one.
    pub fn new(w1: Rational, w2: Rational) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        let ok = w1 > zero && w1 < one && w2 > zero && w2 < one && &w1 + &w2 == one;
        if !ok {
            return Err(Error::InvalidPolarization {
                w1: w1.to_string(),
                w2: w2.to_string(),
            });
        }
        Ok(Polarization { w1, w2 })
    }

    pub fn from_w1(w1: Rational) -> Result<Self> {
        let w2 = &Rational::one() - &w1;
        Self::new(w1, w2)
    }

    pub fn balanced() -> Self {
        let half = Rational::new(1, 2).expect("nonzero denominator");
        Polarization {
            w1: half.clone(),
            w2: half,
        }
    }

    pub fn w1(&self) -> &Rational {
        &self.w1
    }

    pub fn w2(&self) -> &Rational {
        &self.w2
    }

    /// `w1·r1 + w2·r2`.
    pub fn weighted_rank(&self, r1: i64, r2: i64) -> Rational {
        &self.w1 * &Rational::from(r1) + &self.w2 * &Rational::from(r2)
    }
}

impl<'de> Deserialize<'de> for Polarization {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            w1: Rational,
            w2: Rational,
        }
        let r = Repr::deserialize(deserializer)?;
        Polarization::new(r.w1, r.w2).map_err(serde::de::Error::custom)
    }
}

/// Discrete invariants of a depth-one sheaf: multirank and Euler
/// characteristic, plus the Euler characteristics of the two restrictions
/// when known.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SheafClass {
    pub r1: i64,
    pub r2: i64,
    pub chi: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi1: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi2: Option<i64>,
}

impl SheafClass {
    pub fn new(r1: i64, r2: i64, chi: i64) -> Result<Self> {
        for r in [r1, r2] {
            if r < 0 {
                return Err(Error::NegativeRank(r));
            }
        }
        if r1 == 0 && r2 == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(SheafClass {
            r1,
            r2,
            chi,
            chi1: None,
            chi2: None,
        })
    }

    pub fn with_restrictions(mut self, chi1: i64, chi2: i64) -> Self {
        self.chi1 = Some(chi1);
        self.chi2 = Some(chi2);
        self
    }

    /// Relative degrees `(d1, d2)`, when both restriction characteristics are known.
    pub fn multidegree(&self, c: &NodalCurve) -> Result<Option<(i64, i64)>> {
        match (self.chi1, self.chi2) {
            (Some(x1), Some(x2)) => Ok(Some((
                chi_to_degree(x1, self.r1, c.g1)?,
                chi_to_degree(x2, self.r2, c.g2)?,
            ))),
            _ => Ok(None),
        }
    }
}

/// `μ_w(E) = χ / (w1·r1 + w2·r2)`.
pub fn polarized_slope(e: &SheafClass, w: &Polarization) -> Result<Rational> {
    if e.r1 < 0 || e.r2 < 0 {
        return Err(Error::NegativeRank(e.r1.min(e.r2)));
    }
    let denom = w.weighted_rank(e.r1, e.r2);
    if denom.is_zero() {
        return Err(Error::ZeroRank);
    }
    Rational::from(e.chi).checked_div(&denom)
}

/// `d_i = χ_i − r_i·(1 − g_i)`.
pub fn chi_to_degree(chi_i: i64, r_i: i64, g_i: i64) -> Result<i64> {
    let shift = structure_shift(r_i, g_i)?;
    checked("degree", chi_i.checked_sub(shift))
}

/// Inverse of [`chi_to_degree`]: `χ_i = d_i + r_i·(1 − g_i)`.
pub fn degree_to_chi(d_i: i64, r_i: i64, g_i: i64) -> Result<i64> {
    let shift = structure_shift(r_i, g_i)?;
    checked("Euler characteristic", d_i.checked_add(shift))
}

/// `r·χ(O_C) = r·(1 − g)`.
fn structure_shift(r: i64, g: i64) -> Result<i64> {
    let chi_o = checked("1 - g", 1i64.checked_sub(g))?;
    checked("r(1 - g)", r.checked_mul(chi_o))
}

/// Dimension of the moduli space of semistable rank-`r` degree-`d` bundles
/// on a smooth curve of genus `g`.
pub fn dim_moduli_smooth(r: i64, d: i64, g: i64) -> Result<i64> {
    if g < 1 {
        return Err(Error::GenusOutOfRange(g));
    }
    if r < 1 {
        return Err(Error::RankOutOfRange(r, 1));
    }
    if g == 1 {
        return Ok(r.gcd(&d));
    }
    let r2 = checked("r^2", r.checked_mul(r))?;
    let v = r2.checked_mul(g - 1).and_then(|v| v.checked_add(1));
    checked("r^2(g-1)+1", v)
}

/// Shifted slope `(d + m) / rk`.
pub fn mk_slope(d: i64, rk: i64, m: i64) -> Result<Rational> {
    if rk == 0 {
        return Err(Error::ZeroRank);
    }
    if rk < 0 {
        return Err(Error::NegativeRank(rk));
    }
    Rational::new(i128::from(d) + i128::from(m), rk)
}
