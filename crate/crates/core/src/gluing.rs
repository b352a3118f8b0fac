//! The glued sheaf `E_u` at the level of discrete invariants.
//!
//! A gluing is determined numerically by the common rank `r`, the rank `k`
//! of the fiber map `σ: E_{1,q₁} → E_{2,q₂}`, and the Euler characteristics
//! of the two bundles. `σ` itself may be supplied as an explicit matrix, in
//! which case `k` is its rank over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::curve::SheafClass;
use crate::error::{checked, Error, Result};
use crate::exact::Rational;

/// A square matrix with exact rational entries, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct RationalMatrix {
    rows: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::NonSquareMatrix {
                rows: n,
                row,
                cols: r.len(),
            });
        }
        Ok(RationalMatrix { rows })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| Rational::from(i64::from(i == j))).collect())
                .collect(),
        )
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Clears denominators row by row; the row space is unchanged.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect()
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(deserializer)?;
        RationalMatrix::new(rows).map_err(serde::de::Error::custom)
    }
}

/// Rank over ℚ by fraction-free (Bareiss) elimination on the integer
/// matrix obtained by clearing denominators.
pub fn matrix_rank(m: &RationalMatrix) -> usize {
    let mut a = m.integer_rows();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                // Bareiss: the division is exact.
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Numerical datum of a gluing: rank `r` on both sides, `k = rk σ`, and
/// `χ(E₁)`, `χ(E₂)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingDatum {
    r: i64,
    k: i64,
    chi1: i64,
    chi2: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<RationalMatrix>,
}

impl GluingDatum {
    /// Requires `r ≥ 2` and `1 ≤ k ≤ r`.
    pub fn new(r: i64, k: i64, chi1: i64, chi2: i64) -> Result<Self> {
        validate_rank_pair(r, k)?;
        Ok(GluingDatum {
            r,
            k,
            chi1,
            chi2,
            sigma: None,
        })
    }

    /// Takes `r` from the matrix size and `k` from its rank.
    pub fn from_matrix(sigma: RationalMatrix, chi1: i64, chi2: i64) -> Result<Self> {
        let r = i64::try_from(sigma.dim()).map_err(|_| Error::Overflow("matrix size"))?;
        let k = matrix_rank(&sigma) as i64;
        validate_rank_pair(r, k)?;
        Ok(GluingDatum {
            r,
            k,
            chi1,
            chi2,
            sigma: Some(sigma),
        })
    }

    /// Attaches σ, checking it against the declared rank.
    pub fn with_sigma(self, sigma: RationalMatrix) -> Result<Self> {
        let actual = matrix_rank(&sigma) as i64;
        if sigma.dim() as i64 != self.r || actual != self.k {
            return Err(Error::RankMismatch {
                declared: self.k,
                actual,
            });
        }
        Ok(GluingDatum {
            sigma: Some(sigma),
            ..self
        })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn chi1(&self) -> i64 {
        self.chi1
    }

    pub fn chi2(&self) -> i64 {
        self.chi2
    }

    pub fn sigma(&self) -> Option<&RationalMatrix> {
        self.sigma.as_ref()
    }

    /// `χ(E_u) = χ₁ + χ₂ − r`.
    pub fn chi(&self) -> Result<i64> {
        glued_chi(self.r, self.chi1, self.chi2)
    }
}

impl<'de> Deserialize<'de> for GluingDatum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            r: i64,
            k: i64,
            chi1: i64,
            chi2: i64,
            #[serde(default)]
            sigma: Option<RationalMatrix>,
        }
        let r = Repr::deserialize(deserializer)?;
        let u = GluingDatum::new(r.r, r.k, r.chi1, r.chi2).map_err(serde::de::Error::custom)?;
        match r.sigma {
            Some(s) => u.with_sigma(s).map_err(serde::de::Error::custom),
            None => Ok(u),
        }
    }
}

pub(crate) fn validate_rank_pair(r: i64, k: i64) -> Result<()> {
    if r < 2 {
        return Err(Error::RankOutOfRange(r, 2));
    }
    if k < 1 || k > r {
        return Err(Error::GluingRankOutOfRange { k, r });
    }
    Ok(())
}

pub(crate) fn glued_chi(r: i64, chi1: i64, chi2: i64) -> Result<i64> {
    let v = chi1.checked_add(chi2).and_then(|v| v.checked_sub(r));
    checked("chi1 + chi2 - r", v)
}

/// Stalk of a depth-one sheaf at the node: `O_p^a ⊕ O_{q₁}^b ⊕ O_{q₂}^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[i64; 3]", from = "[i64; 3]")]
pub struct StalkType {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl From<StalkType> for [i64; 3] {
    fn from(s: StalkType) -> Self {
        [s.a, s.b, s.c]
    }
}

impl From<[i64; 3]> for StalkType {
    fn from([a, b, c]: [i64; 3]) -> Self {
        StalkType { a, b, c }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluedSheaf {
    pub class: SheafClass,
    pub stalk: StalkType,
    pub vector_bundle: bool,
}

/// Invariants of `E_u`: multirank `(r, r)`, `χ = χ₁ + χ₂ − r`, stalk
/// `(k, r−k, r−k)` at the node, locally free iff `k = r`.
pub fn glued_class(u: &GluingDatum) -> Result<GluedSheaf> {
    let chi = u.chi()?;
    let class = SheafClass::new(u.r, u.r, chi)?.with_restrictions(u.chi1, u.chi2);
    let stalk = StalkType {
        a: u.k,
        b: u.r - u.k,
        c: u.r - u.k,
    };
    Ok(GluedSheaf {
        class,
        stalk,
        vector_bundle: u.k == u.r,
    })
}

/// The subsheaves `K₁ = ker(σ∘ρ₁)` and `K₂ = ker ρ₂`: multiranks `(r, 0)`
/// and `(0, r)`, with `χ(K₁) = χ₁ − k` and `χ(K₂) = χ₂ − r`.
pub fn canonical_subsheaves(u: &GluingDatum) -> Result<(SheafClass, SheafClass)> {
    let chi_k1 = checked("chi1 - k", u.chi1.checked_sub(u.k))?;
    let chi_k2 = checked("chi2 - r", u.chi2.checked_sub(u.r))?;
    Ok((
        SheafClass::new(u.r, 0, chi_k1)?,
        SheafClass::new(0, u.r, chi_k2)?,
    ))
}
