//! Brute-force oracles shared by the integration suites. Nothing here calls
//! the library routine it is used to check.

#![allow(dead_code)]

use nodal_moduli::{Polarization, Rational, RationalMatrix};
use rand::Rng;

/// The four inequalities, written out directly.
pub fn conditions_hold(r: i64, k: i64, chi1: i64, chi2: i64, w1: &Rational) -> bool {
    let chi = Rational::from(chi1 + chi2 - r);
    let w2 = &Rational::one() - w1;
    let x1 = Rational::from(chi1);
    let x2 = Rational::from(chi2);
    let cw1 = &chi * w1;
    let cw2 = &chi * &w2;
    cw1 <= x1
        && x1 <= &cw1 + &Rational::from(k)
        && &cw2 + &Rational::from(r - k) <= x2
        && x2 <= &cw2 + &Rational::from(r)
}

/// Grid denominator bound `max(3, 2(|χ| + 1))`.
pub fn grid_bound(chi: i64) -> i64 {
    3.max(2 * (chi.abs() + 1))
}

/// First grid point `w1 = p/q`, `1 ≤ p < q ≤ grid_bound(χ)`, satisfying the
/// conditions.
pub fn grid_witness(r: i64, k: i64, chi1: i64, chi2: i64) -> Option<Rational> {
    let qmax = grid_bound(chi1 + chi2 - r);
    for den in 2..=qmax {
        for num in 1..den {
            let w1 = Rational::new(num, den).unwrap();
            if conditions_hold(r, k, chi1, chi2, &w1) {
                return Some(w1);
            }
        }
    }
    None
}

pub fn grid_oracle(r: i64, k: i64, chi1: i64, chi2: i64) -> bool {
    grid_witness(r, k, chi1, chi2).is_some()
}

/// Closed-form region membership for `χ ≠ 0`.
pub fn region_characterization(r: i64, k: i64, chi1: i64, chi2: i64) -> bool {
    let chi = chi1 + chi2 - r;
    (chi > 0 && chi1 > 0 && chi2 > r - k) || (chi < 0 && chi1 < k && chi2 < r)
}

fn det(a: &[Vec<Rational>]) -> Rational {
    if a.is_empty() {
        return Rational::one();
    }
    let mut acc = Rational::zero();
    for (j, x) in a[0].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = x * &det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Rank as the size of the largest nonvanishing minor.
pub fn rank_by_minors(m: &RationalMatrix) -> usize {
    let n = m.dim();
    for size in (1..=n).rev() {
        for rs in subsets(n, size) {
            for cs in subsets(n, size) {
                let sub: Vec<Vec<Rational>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m.rows()[i][j].clone()).collect())
                    .collect();
                if !det(&sub).is_zero() {
                    return size;
                }
            }
        }
    }
    0
}

fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=4)).unwrap()
}

/// An `n×n` product of random `n×t` and `t×n` factors, so rank ≤ `t`,
/// with `t` uniform in `1..=n`.
pub fn random_low_rank_matrix(n: usize, rng: &mut impl Rng) -> RationalMatrix {
    let t = rng.gen_range(1..=n);
    let left: Vec<Vec<Rational>> = (0..n)
        .map(|_| (0..t).map(|_| random_rational(rng)).collect())
        .collect();
    let right: Vec<Vec<Rational>> = (0..t)
        .map(|_| (0..n).map(|_| random_rational(rng)).collect())
        .collect();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..t).fold(Rational::zero(), |acc, l| acc + &left[i][l] * &right[l][j]))
                .collect()
        })
        .collect();
    RationalMatrix::new(rows).unwrap()
}

pub fn random_polarization(rng: &mut impl Rng) -> Polarization {
    let den = rng.gen_range(2i64..=60);
    let num = rng.gen_range(1..den);
    Polarization::from_w1(Rational::new(num, den).unwrap()).unwrap()
}
