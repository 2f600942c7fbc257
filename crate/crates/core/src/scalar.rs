//! The number interface the geometry kernel and the interpreter are written against.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::FieldError;

/// Sign of a real number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn of_ordering(ord: std::cmp::Ordering) -> Self {
        match ord {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        Sign::of_ordering((self.as_i8() * other.as_i8()).cmp(&0))
    }
}

/// An ordered field closed under square roots of nonnegative elements.
///
/// `Constructible` is the exact model. `f64` and [`BigFloat`](crate::float::BigFloat)
/// are rounding models used for floating replays of the same programs; their `sign`
/// is the sign of the rounded value.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(value: &BigRational) -> Self;

    /// Nonnegative square root; fails on negative input.
    fn sqrt(&self) -> Result<Self, FieldError>;

    fn sign(&self) -> Sign;

    fn to_f64(&self) -> f64;

    fn try_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        if rhs.sign() == Sign::Zero {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.clone() / rhs.clone())
        }
    }

    fn from_i64(value: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(value.into()))
    }

    fn is_zero_value(&self) -> bool {
        self.sign() == Sign::Zero
    }

    fn same_value(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).sign() == Sign::Zero
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(value: &BigRational) -> Self {
        use num_traits::ToPrimitive;
        value.to_f64().unwrap_or(f64::NAN)
    }

    fn sqrt(&self) -> Result<Self, FieldError> {
        if *self < 0.0 {
            Err(FieldError::NegativeRadicand)
        } else {
            Ok(f64::sqrt(*self))
        }
    }

    fn sign(&self) -> Sign {
        if *self > 0.0 {
            Sign::Positive
        } else if *self < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}
