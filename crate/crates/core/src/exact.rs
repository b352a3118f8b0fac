//! Exact rationals and rational intervals with per-endpoint openness.
//!
//! [`Rational`] wraps an arbitrary-precision fraction kept in lowest terms
//! with a positive denominator. [`RationalInterval`] represents a convex
//! subset of the rational line; the empty set has a single canonical value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer / denom` in canonical form.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    /// Largest integer strictly below `self`.
    pub fn floor_strict(&self) -> BigInt {
        self.ceil() - 1
    }

    pub fn midpoint(&self, other: &Rational) -> Rational {
        Rational((&self.0 + &other.0) / BigInt::from(2))
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational(q)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"p/q"` or `"p"`; decimals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((p, q)) => {
                let p = parse_int(p.trim()).ok_or_else(bad)?;
                let q = parse_int(q.trim()).ok_or_else(bad)?;
                if q.is_zero() {
                    return Err(bad());
                }
                Rational::new(p, q)
            }
            None => parse_int(t).map(Rational::from).ok_or_else(bad),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The five elementary operations on rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Cmp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithOutcome {
    Value(Rational),
    Ordering(Ordering),
}

pub fn rat_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<ArithOutcome> {
    Ok(match op {
        ArithOp::Add => ArithOutcome::Value(a + b),
        ArithOp::Sub => ArithOutcome::Value(a - b),
        ArithOp::Mul => ArithOutcome::Value(a * b),
        ArithOp::Div => ArithOutcome::Value(a.checked_div(b)?),
        ArithOp::Cmp => ArithOutcome::Ordering(a.cmp(b)),
    })
}

/// A convex subset of ℚ. `None` endpoints are infinite (and always open).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lower: Option<Rational>,
    upper: Option<Rational>,
    lower_open: bool,
    upper_open: bool,
}

impl RationalInterval {
    /// General constructor; degenerate inputs collapse to [`RationalInterval::empty`].
    pub fn new(
        lower: Option<Rational>,
        lower_open: bool,
        upper: Option<Rational>,
        upper_open: bool,
    ) -> Self {
        let lower_open = lower_open || lower.is_none();
        let upper_open = upper_open || upper.is_none();
        if let (Some(lo), Some(hi)) = (&lower, &upper) {
            match lo.cmp(hi) {
                Ordering::Greater => return Self::empty(),
                Ordering::Equal if lower_open || upper_open => return Self::empty(),
                _ => {}
            }
        }
        RationalInterval {
            lower,
            upper,
            lower_open,
            upper_open,
        }
    }

    /// The canonical empty interval, `(0, 0)`.
    pub fn empty() -> Self {
        RationalInterval {
            lower: Some(Rational::zero()),
            upper: Some(Rational::zero()),
            lower_open: true,
            upper_open: true,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Self::new(Some(lo), false, Some(hi), false)
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        Self::new(Some(lo), true, Some(hi), true)
    }

    pub fn everything() -> Self {
        Self::new(None, true, None, true)
    }

    /// The open unit interval, where polarization weights live.
    pub fn unit_open() -> Self {
        Self::open(Rational::zero(), Rational::one())
    }

    pub fn lower(&self) -> Option<&Rational> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&Rational> {
        self.upper.as_ref()
    }

    pub fn lower_open(&self) -> bool {
        self.lower_open
    }

    pub fn upper_open(&self) -> bool {
        self.upper_open
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lower, &self.upper) {
            (Some(lo), Some(hi)) => lo > hi || (lo == hi && (self.lower_open || self.upper_open)),
            _ => false,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.is_empty() {
            return false;
        }
        let above = match &self.lower {
            None => true,
            Some(lo) if self.lower_open => x > lo,
            Some(lo) => x >= lo,
        };
        let below = match &self.upper {
            None => true,
            Some(hi) if self.upper_open => x < hi,
            Some(hi) => x <= hi,
        };
        above && below
    }

    pub fn intersect(&self, other: &RationalInterval) -> RationalInterval {
        if self.is_empty() || other.is_empty() {
            return Self::empty();
        }
        let (lower, lower_open) = match (&self.lower, &other.lower) {
            (None, None) => (None, true),
            (Some(a), None) => (Some(a.clone()), self.lower_open),
            (None, Some(b)) => (Some(b.clone()), other.lower_open),
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Greater => (Some(a.clone()), self.lower_open),
                Ordering::Less => (Some(b.clone()), other.lower_open),
                Ordering::Equal => (Some(a.clone()), self.lower_open || other.lower_open),
            },
        };
        let (upper, upper_open) = match (&self.upper, &other.upper) {
            (None, None) => (None, true),
            (Some(a), None) => (Some(a.clone()), self.upper_open),
            (None, Some(b)) => (Some(b.clone()), other.upper_open),
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => (Some(a.clone()), self.upper_open),
                Ordering::Greater => (Some(b.clone()), other.upper_open),
                Ordering::Equal => (Some(a.clone()), self.upper_open || other.upper_open),
            },
        };
        Self::new(lower, lower_open, upper, upper_open)
    }

    /// A point of the interval: the midpoint when both ends are finite,
    /// one unit inside a finite end otherwise, `None` when empty.
    pub fn sample(&self) -> Option<Rational> {
        if self.is_empty() {
            return None;
        }
        Some(match (&self.lower, &self.upper) {
            (Some(lo), Some(hi)) => lo.midpoint(hi),
            (Some(lo), None) => lo + &Rational::one(),
            (None, Some(hi)) => hi - &Rational::one(),
            (None, None) => Rational::zero(),
        })
    }

    /// Reflects through `x ↦ 1 − x`.
    pub fn reflect_unit(&self) -> RationalInterval {
        if self.is_empty() {
            return Self::empty();
        }
        let one = Rational::one();
        let flip = |x: &Option<Rational>| x.as_ref().map(|v| &one - v);
        Self::new(
            flip(&self.upper),
            self.upper_open,
            flip(&self.lower),
            self.lower_open,
        )
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let open = if self.lower_open { '(' } else { '[' };
        let close = if self.upper_open { ')' } else { ']' };
        match &self.lower {
            Some(lo) => write!(f, "{open}{lo}, ")?,
            None => write!(f, "(-inf, ")?,
        }
        match &self.upper {
            Some(hi) => write!(f, "{hi}{close}"),
            None => write!(f, "+inf)"),
        }
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lower: Option<Rational>,
    upper: Option<Rational>,
    lower_open: bool,
    upper_open: bool,
}

impl Serialize for RationalInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalRepr {
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            lower_open: self.lower_open,
            upper_open: self.upper_open,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalInterval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = IntervalRepr::deserialize(deserializer)?;
        Ok(RationalInterval::new(
            r.lower,
            r.lower_open,
            r.upper,
            r.upper_open,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(q("1/3") + q("1/6"), q("1/2"));
        let half = Rational::new(2, 4).unwrap();
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(
            rat_arith(&q("1/3"), &Rational::new(2, 6).unwrap(), ArithOp::Cmp).unwrap(),
            ArithOutcome::Ordering(Ordering::Equal)
        );
        assert_eq!(
            rat_arith(&q("1"), &Rational::zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        assert_eq!(Rational::new(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn parsing() {
        assert_eq!(q("-6/4").to_string(), "-3/2");
        assert_eq!(q("3/-6").to_string(), "-1/2");
        assert_eq!(q("7").to_string(), "7");
        for bad in ["0.5", "1/0", "", "a/b", "1//2", "--1", "1/ "] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(q("7/2").floor(), BigInt::from(3));
        assert_eq!(q("-7/2").floor(), BigInt::from(-4));
        assert_eq!(q("-7/2").ceil(), BigInt::from(-3));
        assert_eq!(q("3").floor_strict(), BigInt::from(2));
        assert_eq!(q("5/2").floor_strict(), BigInt::from(2));
    }

    #[test]
    fn intersect_examples() {
        let a = RationalInterval::closed(q("1/3"), q("2/3"));
        assert_eq!(a.intersect(&RationalInterval::unit_open()), a);

        let b = RationalInterval::closed(q("0"), q("1/2"));
        let c = RationalInterval::new(Some(q("1/2")), true, Some(q("1")), false);
        assert!(b.intersect(&c).is_empty());
        assert_eq!(b.intersect(&c), RationalInterval::empty());

        let d = RationalInterval::new(None, true, Some(q("1/4")), true);
        let e = RationalInterval::closed(q("0"), q("1"));
        assert_eq!(
            d.intersect(&e),
            RationalInterval::new(Some(q("0")), false, Some(q("1/4")), true)
        );
    }

    #[test]
    fn sample_examples() {
        assert_eq!(
            RationalInterval::closed(q("1/3"), q("2/3")).sample(),
            Some(q("1/2"))
        );
        assert_eq!(RationalInterval::empty().sample(), None);
        assert_eq!(RationalInterval::unit_open().sample(), Some(q("1/2")));
        assert_eq!(
            RationalInterval::closed(q("2"), q("2")).sample(),
            Some(q("2"))
        );
    }

    #[test]
    fn json_shape() {
        let i = RationalInterval::new(Some(q("1/3")), false, None, true);
        let v = serde_json::to_value(&i).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"lower": "1/3", "upper": null, "lower_open": false, "upper_open": true})
        );
        let back: RationalInterval = serde_json::from_value(v).unwrap();
        assert_eq!(back, i);
    }

    fn small_rat() -> impl Strategy<Value = (i64, i64)> {
        (-1_000_000i64..=1_000_000, 1i64..=1_000_000)
    }

    fn interval() -> impl Strategy<Value = RationalInterval> {
        let end = prop::option::of((-20i64..=20, 1i64..=6));
        (end.clone(), any::<bool>(), end, any::<bool>()).prop_map(|(lo, lo_open, hi, hi_open)| {
            let mk = |(n, d): (i64, i64)| Rational::new(n, d).unwrap();
            RationalInterval::new(lo.map(mk), lo_open, hi.map(mk), hi_open)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn arithmetic_matches_cross_multiplication((a, b) in small_rat(), (c, d) in small_rat()) {
            let x = Rational::new(a, b).unwrap();
            let y = Rational::new(c, d).unwrap();
            let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
            let same = |r: &Rational, n: i128, m: i128| {
                r.numer() * BigInt::from(m) == BigInt::from(n) * r.denom()
            };
            prop_assert!(same(&(&x + &y), a * d + c * b, b * d));
            prop_assert!(same(&(&x - &y), a * d - c * b, b * d));
            prop_assert!(same(&(&x * &y), a * c, b * d));
            if c != 0 {
                prop_assert!(same(&x.checked_div(&y).unwrap(), a * d, b * c));
            }
            prop_assert_eq!(x.cmp(&y), (a * d).cmp(&(c * b)));
            // canonical form
            for r in [&x + &y, &x * &y] {
                prop_assert!(r.denom().is_positive());
                prop_assert!(r.numer().gcd(r.denom()).is_one());
                prop_assert_eq!(Rational::new(r.numer().clone(), r.denom().clone()).unwrap(), r.clone());
            }
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn intersect_laws(a in interval(), b in interval(), c in interval()) {
            prop_assert_eq!(a.intersect(&b), b.intersect(&a));
            prop_assert_eq!(a.intersect(&b).intersect(&c), a.intersect(&b.intersect(&c)));
            prop_assert_eq!(a.intersect(&a), a.clone());
        }

        #[test]
        fn sample_is_member(a in interval()) {
            match a.sample() {
                Some(x) => prop_assert!(a.contains(&x)),
                None => prop_assert!(a.is_empty()),
            }
        }

        #[test]
        fn intersection_membership(a in interval(), b in interval(), (n, d) in (-25i64..=25, 1i64..=12)) {
            let x = Rational::new(n, d).unwrap();
            prop_assert_eq!(a.intersect(&b).contains(&x), a.contains(&x) && b.contains(&x));
        }
    }
}
