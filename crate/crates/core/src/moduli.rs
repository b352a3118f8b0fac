//! Irreducible components of `U_C(w, r, χ)` and the dimension formulas
//! attached to them.

use serde::{Deserialize, Serialize};

use crate::curve::{arithmetic_genus, chi_to_degree, dim_moduli_smooth, NodalCurve, Polarization};
use crate::error::{checked, Error, Result};
use crate::exact::Rational;

/// One component, indexed by the pair `(χ₁, χ₂)` of restriction
/// characteristics, with the matching multidegree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub chi1: i64,
    pub chi2: i64,
    pub d1: i64,
    pub d2: i64,
    pub dimension: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentEnumeration {
    pub records: Vec<ComponentRecord>,
    /// `w1·χ` is an integer, so both window ends are attained.
    pub non_generic: bool,
    pub warnings: Vec<String>,
}

fn bigint_to_i64(x: num_bigint::BigInt) -> Result<i64> {
    use num_traits::ToPrimitive;
    x.to_i64().ok_or(Error::Overflow("window bound"))
}

/// All `χ₁` with `w1·χ ≤ χ₁ ≤ w1·χ + r` whose partner `χ₂ = χ + r − χ₁`
/// satisfies `w2·χ ≤ χ₂ ≤ w2·χ + r`, in increasing `χ₁`.
pub fn enumerate_components(
    c: &NodalCurve,
    r: i64,
    chi: i64,
    w: &Polarization,
) -> Result<ComponentEnumeration> {
    if r < 2 {
        return Err(Error::RankOutOfRange(r, 2));
    }
    let dimension = component_dimension(c, r)?;
    let chi_q = Rational::from(chi);
    let r_q = Rational::from(r);
    let lo1 = w.w1() * &chi_q;
    let lo2 = w.w2() * &chi_q;
    let hi1 = &lo1 + &r_q;
    let hi2 = &lo2 + &r_q;
    let total = checked("chi + r", chi.checked_add(r))?;

    let mut records = Vec::new();
    for chi1 in bigint_to_i64(lo1.ceil())?..=bigint_to_i64(hi1.floor())? {
        let chi2 = checked("chi2", total.checked_sub(chi1))?;
        let x1 = Rational::from(chi1);
        let x2 = Rational::from(chi2);
        if !(lo1 <= x1 && x1 <= hi1 && lo2 <= x2 && x2 <= hi2) {
            continue;
        }
        records.push(ComponentRecord {
            chi1,
            chi2,
            d1: chi_to_degree(chi1, r, c.g1())?,
            d2: chi_to_degree(chi2, r, c.g2())?,
            dimension,
        });
    }

    let non_generic = lo1.is_integer();
    let warnings = if non_generic {
        vec![format!(
            "non-generic polarization: w1*chi = {lo1} is an integer; boundary values of chi1 are included"
        )]
    } else {
        Vec::new()
    };
    Ok(ComponentEnumeration {
        records,
        non_generic,
        warnings,
    })
}

/// `r²(g₁ + g₂ − 1) + 1`.
pub fn component_dimension(c: &NodalCurve, r: i64) -> Result<i64> {
    if r < 1 {
        return Err(Error::RankOutOfRange(r, 1));
    }
    let pa = arithmetic_genus(c)?;
    let v = r
        .checked_mul(r)
        .and_then(|r2| r2.checked_mul(pa - 1))
        .and_then(|v| v.checked_add(1));
    checked("component dimension", v)
}

/// Dimension of the projective bundle over `U_{C₁}(r, d₁) × U_{C₂}(r, d₂)`
/// with coprime degrees: base dimensions plus the fiber `ℙ^{r²−1}`.
pub fn projective_bundle_dimension(c: &NodalCurve, r: i64) -> Result<i64> {
    if r < 1 {
        return Err(Error::RankOutOfRange(r, 1));
    }
    let base1 = dim_moduli_smooth(r, 1, c.g1())?;
    let base2 = dim_moduli_smooth(r, 1, c.g2())?;
    let fiber = checked("r^2 - 1", r.checked_mul(r).map(|v| v - 1))?;
    let v = base1.checked_add(base2).and_then(|v| v.checked_add(fiber));
    checked("projective bundle dimension", v)
}

/// `(r² − 1)(g₁ + g₂ − 1)`: fibers of the determinant map.
pub fn fixed_det_fiber_dimension(c: &NodalCurve, r: i64) -> Result<i64> {
    if r < 1 {
        return Err(Error::RankOutOfRange(r, 1));
    }
    let pa = arithmetic_genus(c)?;
    let v = r.checked_mul(r).and_then(|r2| (r2 - 1).checked_mul(pa - 1));
    checked("fixed determinant fiber dimension", v)
}
