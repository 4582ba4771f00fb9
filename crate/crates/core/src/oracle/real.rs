use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::number::rational_to_f64;

/// Numerators and denominators past this many bits fall back to floats,
/// so long-running programs do not grow rationals without bound.
const MAX_EXACT_BITS: u64 = 4096;

/// A real number that stays an exact rational for as long as it can.
///
/// Irrational square roots and oversized rationals become `f64`.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Exact(BigRational),
    Approx(f64),
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.numer().bits() > MAX_EXACT_BITS || r.denom().bits() > MAX_EXACT_BITS {
            Real::Approx(rational_to_f64(&r))
        } else {
            Real::Exact(r)
        }
    }

    /// Exact for every finite input (binary floats are rationals).
    pub fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).map_or(Real::Approx(x), Real::Exact)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => rational_to_f64(r),
            Real::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_zero(),
            Real::Approx(x) => *x == 0.0,
        }
    }

    fn combine(&self, other: &Real, exact: impl Fn(&BigRational, &BigRational) -> BigRational, approx: impl Fn(f64, f64) -> f64) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::from_rational(exact(a, b)),
            _ => Real::Approx(approx(self.to_f64(), other.to_f64())),
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        self.combine(other, |a, b| a + b, |a, b| a + b)
    }

    /// `max(self − other, 0)`.
    pub fn truncated_sub(&self, other: &Real) -> Real {
        let d = self.combine(other, |a, b| a - b, |a, b| a - b);
        if d.cmp_total(&Real::zero()) == Ordering::Less {
            Real::zero()
        } else {
            d
        }
    }

    /// Signed difference, for comparisons.
    pub fn sub(&self, other: &Real) -> Real {
        self.combine(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &Real) -> Real {
        self.combine(other, |a, b| a * b, |a, b| a * b)
    }

    /// `None` when dividing by zero.
    pub fn div(&self, other: &Real) -> Option<Real> {
        if other.is_zero() {
            return None;
        }
        Some(self.combine(other, |a, b| a / b, |a, b| a / b))
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(r.abs()),
            Real::Approx(x) => Real::Approx(x.abs()),
        }
    }

    /// Exact when numerator and denominator are perfect squares.
    pub fn sqrt(&self) -> Real {
        if let Real::Exact(r) = self {
            if !r.is_negative() {
                let (n, d) = (r.numer(), r.denom());
                let (sn, sd) = (n.sqrt(), d.sqrt());
                if &(&sn * &sn) == n && &(&sd * &sd) == d {
                    return Real::Exact(BigRational::new(sn, sd));
                }
            }
        }
        Real::Approx(self.to_f64().sqrt())
    }

    /// Exact comparison when both sides are exact, float comparison otherwise.
    pub fn cmp_total(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl From<&crate::Number> for Real {
    fn from(n: &crate::Number) -> Self {
        Real::from_rational(n.as_rational().clone())
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Self {
        Real::Exact(BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Real::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Real::Approx(x) => write!(f, "~{x}"),
        }
    }
}
