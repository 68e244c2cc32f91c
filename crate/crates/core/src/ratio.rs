//! Exact non-negative rationals and density values that may be infinite.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<u64>;

pub fn rational(numer: u64, denom: u64) -> Rational {
    Ratio::new(numer, denom)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3"`, `"1/2"` or a decimal such as `"0.05"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::input(format!("not a non-negative rational: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| bad())?;
        let den: u64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if (int.is_empty() && frac.is_empty()) || frac.len() > 18 {
        return Err(bad());
    }
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let mut den = 1u64;
    let mut num = 0u64;
    for c in frac.chars() {
        let d = c.to_digit(10).ok_or_else(bad)? as u64;
        num = num * 10 + d;
        den *= 10;
    }
    let whole = int.checked_mul(den).ok_or_else(bad)?;
    Ok(Ratio::new(whole.checked_add(num).ok_or_else(bad)?, den))
}

/// A density parameter ψ: an exact rational, or infinite when the relevant
/// degree (or occurrence count) is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Psi {
    Finite(Rational),
    Infinite,
}

impl Psi {
    pub fn finite(self) -> Option<Rational> {
        match self {
            Psi::Finite(r) => Some(r),
            Psi::Infinite => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Psi::Finite(r) => to_f64(&r),
            Psi::Infinite => f64::INFINITY,
        }
    }

    /// `numer / denom`, infinite when `denom == 0`.
    pub fn quotient(numer: u64, denom: u64) -> Psi {
        if denom == 0 {
            Psi::Infinite
        } else {
            Psi::Finite(Ratio::new(numer, denom))
        }
    }
}

impl PartialOrd for Psi {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Psi {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Psi::Finite(a), Psi::Finite(b)) => a.cmp(b),
            (Psi::Finite(_), Psi::Infinite) => Ordering::Less,
            (Psi::Infinite, Psi::Finite(_)) => Ordering::Greater,
            (Psi::Infinite, Psi::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psi::Finite(r) => write!(f, "{r}"),
            Psi::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Psi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" => Ok(Psi::Infinite),
            other => parse_rational(other).map(Psi::Finite),
        }
    }
}

impl Serialize for Psi {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Psi::Finite(r) => serializer.serialize_f64(to_f64(r)),
            Psi::Infinite => serializer.serialize_none(),
        }
    }
}

/// Serializes an optional rational as a JSON number (or `null`).
pub(crate) fn serialize_opt_ratio<S: Serializer>(
    value: &Option<Rational>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(r) => serializer.serialize_f64(to_f64(r)),
        None => serializer.serialize_none(),
    }
}
