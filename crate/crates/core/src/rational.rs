//! Exact rational helpers shared by every exact module.
//!
//! All polyhedral data lives in [`Q`] (arbitrary precision rationals). Values
//! that may diverge use [`ExtRational`], which serializes `+∞` as `"inf"`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an integer, a decimal (optionally with exponent) or a `p/q` string.
pub fn parse_rational(text: &str) -> Result<Q, ParseError> {
    let s = text.trim();
    let bad = || ParseError::NotRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Q::from_integer(numer);
    if shift >= 0 {
        value *= Q::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= Q::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// `p/q`, or `p` when the denominator is one.
pub fn format_rational(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn from_f64(value: f64) -> Option<Q> {
    Q::from_float(value)
}

pub fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(values: &[Q]) -> Vec<BigInt> {
    let d = common_denominator(values);
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| (v * Q::from_integer(d.clone())).to_integer())
        .collect();
    normalize_integer(ints)
}

/// Divides an integer vector by the gcd of its entries.
pub fn normalize_integer(mut values: Vec<BigInt>) -> Vec<BigInt> {
    let g = values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in values.iter_mut() {
            *v /= &g;
        }
    }
    values
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// A rational extended by signed infinities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    NegInfinite,
    Finite(Q),
    Infinite,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtRational::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::NegInfinite => f64::NEG_INFINITY,
            ExtRational::Finite(v) => to_f64(v),
            ExtRational::Infinite => f64::INFINITY,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            ExtRational::NegInfinite => 0,
            ExtRational::Finite(_) => 1,
            ExtRational::Infinite => 2,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        match text.trim() {
            "inf" | "+inf" => Ok(ExtRational::Infinite),
            "-inf" => Ok(ExtRational::NegInfinite),
            other => parse_rational(other).map(ExtRational::Finite),
        }
    }
}

impl From<Q> for ExtRational {
    fn from(v: Q) -> Self {
        ExtRational::Finite(v)
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInfinite => f.write_str("-inf"),
            ExtRational::Finite(v) => f.write_str(&format_rational(v)),
            ExtRational::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        ExtRational::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`Q`] as a `"p/q"` string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Q, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Q, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(value: &[Q], serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(value.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Q>, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        items
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_rational_forms() {
        assert_eq!(parse_rational("3").unwrap(), q(3));
        assert_eq!(parse_rational("-1/2").unwrap(), q_frac(-1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), q_frac(1, 4));
        assert_eq!(parse_rational("1.5e2").unwrap(), q(150));
        assert_eq!(parse_rational("2e-1").unwrap(), q_frac(1, 5));
        assert_eq!(parse_rational(".5").unwrap(), q_frac(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_rational(&q(6)), "6");
        assert_eq!(format_rational(&q_frac(2, 4)), "1/2");
        assert_eq!(ExtRational::Infinite.to_string(), "inf");
    }

    #[test]
    fn extended_order() {
        assert!(ExtRational::NegInfinite < ExtRational::Finite(q(-100)));
        assert!(ExtRational::Finite(q(100)) < ExtRational::Infinite);
        assert!(ExtRational::Finite(q(1)) < ExtRational::Finite(q(2)));
    }

    #[test]
    fn primitive_integer_vectors() {
        let v = primitive_integer(&[q_frac(1, 2), q_frac(1, 3)]);
        assert_eq!(v, vec![BigInt::from(3), BigInt::from(2)]);
    }
}
