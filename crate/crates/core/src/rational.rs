//! Exact rationals and the extended line `ℚ ∪ {±∞}`.
//!
//! `Rational` is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. This module adds the textual format
//! used by every file format in the crate (`"p"` or `"p/q"`), a couple of
//! constructors, and [`ExtPoint`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

pub type Rational = num_rational::BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (optional sign on `p`, `q` nonzero) into lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Lowest-terms text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Nearest `f64`, for drawing and display only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal approximation with `digits` significant digits.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let v = to_f64(r);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let digits = digits.max(1);
    let exp = v.abs().log10().floor() as i64;
    if !(-5..=15).contains(&exp) {
        return format!("{:.*e}", digits - 1, v);
    }
    let decimals = (digits as i64 - 1 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Bits needed for the largest of numerator and denominator.
pub fn height_bits(r: &Rational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

/// A point of the extended line. The derived order is the natural one:
/// `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtPoint {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtPoint {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtPoint::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtPoint::Finite(_))
    }

    /// Compares against a finite rational.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        match self {
            ExtPoint::NegInf => Ordering::Less,
            ExtPoint::PosInf => Ordering::Greater,
            ExtPoint::Finite(r) => r.cmp(x),
        }
    }

    pub fn parse(s: &str) -> Result<ExtPoint, Error> {
        match s.trim() {
            "-inf" | "-oo" | "-infinity" => Ok(ExtPoint::NegInf),
            "inf" | "+inf" | "oo" | "+oo" | "infinity" => Ok(ExtPoint::PosInf),
            other => parse_rational(other).map(ExtPoint::Finite),
        }
    }
}

impl From<Rational> for ExtPoint {
    fn from(r: Rational) -> Self {
        ExtPoint::Finite(r)
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtPoint::NegInf => write!(f, "-inf"),
            ExtPoint::PosInf => write!(f, "+inf"),
            ExtPoint::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for ExtPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ExtPoint::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a single `Rational` as a string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn one() -> Rational {
    Rational::one()
}
