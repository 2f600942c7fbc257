//! Binary floating point with a fixed mantissa width, rounded to nearest.
//!
//! Used to replay constructions numerically, independently of the exact tower
//! arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::FieldError;
use crate::scalar::{Scalar, Sign};

/// `mantissa · 2^exponent` with `|mantissa|` holding exactly `BITS` bits
/// (or zero).
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat<const BITS: u32> {
    mantissa: BigInt,
    exponent: i64,
}

pub type Float200 = BigFloat<200>;

impl<const BITS: u32> BigFloat<BITS> {
    fn normalize(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self {
                mantissa,
                exponent: 0,
            };
        }
        let bits = mantissa.bits() as i64;
        let target = BITS as i64;
        if bits <= target {
            let shift = (target - bits) as usize;
            return Self {
                mantissa: mantissa << shift,
                exponent: exponent - shift as i64,
            };
        }
        let shift = (bits - target) as usize;
        let negative = mantissa.is_negative();
        let mag = mantissa.abs();
        let half = BigInt::one() << (shift - 1);
        let mut rounded: BigInt = (&mag + &half) >> shift;
        // ties to even
        if (&mag & ((BigInt::one() << shift) - 1u32)) == half && (&rounded & BigInt::one()) == BigInt::one() {
            rounded -= 1u32;
        }
        let rounded = if negative { -rounded } else { rounded };
        if rounded.bits() as i64 > target {
            Self::normalize(rounded, exponent + shift as i64)
        } else {
            Self {
                mantissa: rounded,
                exponent: exponent + shift as i64,
            }
        }
    }

    pub fn from_rational_value(value: &BigRational) -> Self {
        let num = value.numer();
        let den = value.denom();
        if num.is_zero() {
            return Self::normalize(BigInt::zero(), 0);
        }
        // enough quotient bits that the truncation sits below the rounding bit
        let shift = BITS as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let shift = shift.max(0) as usize + 2;
        let scaled = num << shift;
        let quotient = &scaled / den;
        let sticky = if (&quotient * den) != scaled { BigInt::one() } else { BigInt::zero() };
        // keep one sticky bit so that inexact quotients never look like ties
        let q = (quotient << 1usize) + if num.is_negative() { -sticky } else { sticky };
        Self::normalize(q, -(shift as i64) - 1)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    fn sqrt_value(&self) -> Self {
        if self.mantissa.is_zero() {
            return self.clone();
        }
        // exponent parity even, and at least 2·BITS + 4 mantissa bits
        let mut shift = 2 * BITS as i64 + 4 - self.mantissa.bits() as i64;
        if shift < 0 {
            shift = 0;
        }
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = &self.mantissa << shift as usize;
        let root = scaled.sqrt();
        let sticky = if &root * &root != scaled { BigInt::one() } else { BigInt::zero() };
        Self::normalize((root << 1usize) + sticky, (self.exponent - shift) / 2 - 1)
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).mantissa.sign().cmp(&BigSign::NoSign)
    }
}

impl<const BITS: u32> fmt::Debug for BigFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64_value())
    }
}

impl<const BITS: u32> BigFloat<BITS> {
    fn to_f64_value(&self) -> f64 {
        let bits = self.mantissa.bits() as i64;
        let keep = 60.min(bits);
        let m = (&self.mantissa >> (bits - keep) as usize).to_f64().unwrap_or(0.0);
        m * 2f64.powi((self.exponent + bits - keep) as i32)
    }
}

impl<const BITS: u32> PartialOrd for BigFloat<BITS> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl<const BITS: u32> Add for BigFloat<BITS> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.mantissa.is_zero() {
            return rhs;
        }
        if rhs.mantissa.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = hi.exponent - lo.exponent;
        if gap > 2 * BITS as i64 + 8 {
            // lo only affects the sticky bit
            let nudge = if lo.mantissa.is_negative() { -1 } else { 1 };
            return Self::normalize((hi.mantissa << 4usize) + nudge, hi.exponent - 4);
        }
        Self::normalize((hi.mantissa << gap as usize) + lo.mantissa, lo.exponent)
    }
}

impl<const BITS: u32> Neg for BigFloat<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl<const BITS: u32> Sub for BigFloat<BITS> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const BITS: u32> Mul for BigFloat<BITS> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::normalize(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

/// Panics on division by zero.
impl<const BITS: u32> Div for BigFloat<BITS> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.mantissa.is_zero(), "division by zero");
        let shift = BITS as usize + 4;
        let num = self.mantissa << shift;
        let quotient = &num / &rhs.mantissa;
        let sticky = if &quotient * &rhs.mantissa != num { 1 } else { 0 };
        let sticky = if quotient.is_negative() || (quotient.is_zero() && num.sign() != rhs.mantissa.sign()) {
            -sticky
        } else {
            sticky
        };
        Self::normalize(
            (quotient << 1usize) + sticky,
            self.exponent - rhs.exponent - shift as i64 - 1,
        )
    }
}

impl<const BITS: u32> Zero for BigFloat<BITS> {
    fn zero() -> Self {
        Self::normalize(BigInt::zero(), 0)
    }
    fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl<const BITS: u32> One for BigFloat<BITS> {
    fn one() -> Self {
        Self::normalize(BigInt::one(), 0)
    }
}

impl<const BITS: u32> Scalar for BigFloat<BITS> {
    fn from_rational(value: &BigRational) -> Self {
        Self::from_rational_value(value)
    }

    fn sqrt(&self) -> Result<Self, FieldError> {
        if self.mantissa.is_negative() {
            Err(FieldError::NegativeRadicand)
        } else {
            Ok(self.sqrt_value())
        }
    }

    fn sign(&self) -> Sign {
        match self.mantissa.sign() {
            BigSign::Minus => Sign::Negative,
            BigSign::NoSign => Sign::Zero,
            BigSign::Plus => Sign::Positive,
        }
    }

    fn to_f64(&self) -> f64 {
        self.to_f64_value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Float200;

    fn f(p: i64, q: i64) -> F {
        F::from_rational_value(&BigRational::new(p.into(), q.into()))
    }

    fn rel_err(x: &F, exact: &BigRational) -> f64 {
        ((x.to_rational() - exact) / exact).abs().to_f64().unwrap()
    }

    #[test]
    fn rational_conversion_is_correctly_rounded() {
        let third = BigRational::new(1.into(), 3.into());
        assert!(rel_err(&f(1, 3), &third) < 2f64.powi(-199));
        assert_eq!(f(3, 4).to_rational(), BigRational::new(3.into(), 4.into()));
        assert_eq!(f(-3, 4).to_rational(), BigRational::new((-3).into(), 4.into()));
    }

    #[test]
    fn arithmetic_close_to_exact() {
        let x = f(1, 3) + f(1, 7) * f(2, 9) - f(5, 11) / f(13, 17);
        let exact = BigRational::new(1.into(), 3.into())
            + BigRational::new(2.into(), 63.into())
            - BigRational::new(85.into(), 143.into());
        assert!(rel_err(&x, &exact) < 2f64.powi(-195));
    }

    #[test]
    fn sqrt_squares_back() {
        let two = f(2, 1);
        let r = two.sqrt_value();
        let back = r.clone() * r;
        assert!(rel_err(&back, &BigRational::from_integer(2.into())) < 2f64.powi(-198));
        assert_eq!(f(9, 4).sqrt_value().to_rational(), BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn ordering() {
        assert!(f(1, 3) < f(1, 2));
        assert_eq!(Scalar::sign(&(f(1, 3) - f(1, 3))), Sign::Zero);
        assert_eq!(Scalar::sign(&f(-1, 3)), Sign::Negative);
    }
}
