//! Exact decimal/rational literals shared by the frontend and the oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Parameter bindings supplied at compile/simulate time (`-p a0=32`).
pub type Bindings = BTreeMap<String, Number>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid number literal `{0}`")]
pub struct NumberError(pub String);

/// An exact rational number written as a decimal (`0.5`, `1e-3`) or a
/// fraction (`1/2`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Number(BigRational);

impl Number {
    pub fn from_integer(n: i64) -> Self {
        Number(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Number(r)
    }

    /// Exact conversion of a finite float (every finite f64 is a dyadic rational).
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Number)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Correctly scaled conversion that survives numerators/denominators wider
/// than f64's exponent range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let numer = r.numer().abs();
    let shift = numer.bits() as i64 - r.denom().bits() as i64 - 64;
    let quotient = if shift >= 0 {
        numer / (r.denom() << shift as usize)
    } else {
        (numer << (-shift) as usize) / r.denom()
    };
    let magnitude = quotient.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(shift as i32);
    if r.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

impl FromStr for Number {
    type Err = NumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || NumberError(s.to_string());
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n: Number = num.parse()?;
            let d: Number = den.parse()?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Number(n.0 / d.0));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (mantissa, exponent) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().map_err(|_| err())?),
            None => (body, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| err())?);
        let scale = exponent - frac_part.len() as i32;
        let ten = BigRational::from_integer(BigInt::from(10));
        if scale >= 0 {
            value *= num_traits::pow(ten, scale as usize);
        } else {
            value /= num_traits::pow(ten, (-scale) as usize);
        }
        if neg {
            value = -value;
        }
        Ok(Number(value))
    }
}

impl fmt::Display for Number {
    /// Integers print bare, terminating fractions as decimals, everything
    /// else as `p/q`. The output always parses back to the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.0;
        if r.is_integer() {
            return write!(f, "{}", r.numer());
        }
        let mut den = r.denom().clone();
        let (mut twos, mut fives) = (0usize, 0usize);
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        while (&den % &two).is_zero() {
            den /= &two;
            twos += 1;
        }
        while (&den % &five).is_zero() {
            den /= &five;
            fives += 1;
        }
        if !den.is_one() {
            return write!(f, "{}/{}", r.numer(), r.denom());
        }
        let places = twos.max(fives);
        let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
        let digits = scaled.numer().abs().to_string();
        let digits = format!("{digits:0>width$}", width = places + 1);
        let (int_part, frac_part) = digits.split_at(digits.len() - places);
        let sign = if r.is_negative() { "-" } else { "" };
        write!(f, "{sign}{int_part}.{frac_part}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_forms() {
        assert_eq!("32".parse::<Number>().unwrap(), Number::from_integer(32));
        assert_eq!("0.5".parse::<Number>().unwrap().to_f64(), 0.5);
        assert_eq!("1e-3".parse::<Number>().unwrap().to_string(), "0.001");
        assert_eq!("2.5E2".parse::<Number>().unwrap(), Number::from_integer(250));
        assert_eq!("1/2".parse::<Number>().unwrap().to_string(), "0.5");
        assert_eq!("1/3".parse::<Number>().unwrap().to_string(), "1/3");
        assert_eq!("-0.25".parse::<Number>().unwrap().to_string(), "-0.25");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", ".", "1.2.3", "abc", "1/0", "1e", "--1"] {
            assert!(bad.parse::<Number>().is_err(), "{bad}");
        }
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(
            num_traits::pow(BigInt::from(10), 400) + BigInt::one(),
            num_traits::pow(BigInt::from(10), 400),
        );
        assert!((rational_to_f64(&big) - 1.0).abs() < 1e-15);
    }
}
