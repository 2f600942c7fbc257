use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::{self, Interval};
use super::rational::{is_rational_square, rational_sqrt_exact, split_square_factor};
use super::tower::{self, adjoin, hash_parts, is_prefix, merge, Level};
use super::{decimal, FieldError};
use crate::scalar::{Scalar, Sign};

/// An exact real number in a tower of quadratic extensions of the rationals.
///
/// Cloning is cheap; values are immutable and shared.
#[derive(Clone)]
pub struct Constructible(Arc<Node>);

pub(super) struct Node {
    repr: Repr,
    hash: u64,
}

pub(super) enum Repr {
    Rational(BigRational),
    /// `a + b·√r` where `r` is the radicand of `level`; `a` and `b` lie in the chain
    /// ending at `level.base` and `b` is nonzero.
    Quadratic {
        level: Level,
        a: Constructible,
        b: Constructible,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

static ZERO: LazyLock<Constructible> =
    LazyLock::new(|| Constructible::from_rational(BigRational::zero()));
static ONE: LazyLock<Constructible> =
    LazyLock::new(|| Constructible::from_rational(BigRational::one()));

impl Constructible {
    pub fn from_rational(value: BigRational) -> Self {
        let hash = hash_parts((0u8, value.numer(), value.denom()));
        Constructible(Arc::new(Node {
            repr: Repr::Rational(value),
            hash,
        }))
    }

    pub fn from_integer(value: i64) -> Self {
        Self::from_rational(BigRational::from_integer(value.into()))
    }

    /// The rational `p/q`.
    pub fn ratio(p: i64, q: i64) -> Result<Self, FieldError> {
        super::rational(p, q).map(Self::from_rational)
    }

    pub fn zero() -> Self {
        ZERO.clone()
    }

    pub fn one() -> Self {
        ONE.clone()
    }

    pub(super) fn generator(level: &Level) -> Self {
        Self::quadratic(level.clone(), Self::zero(), Self::one())
    }

    fn quadratic(level: Level, a: Constructible, b: Constructible) -> Self {
        let hash = hash_parts((1u8, level.id, a.0.hash, b.0.hash));
        Constructible(Arc::new(Node {
            repr: Repr::Quadratic { level, a, b },
            hash,
        }))
    }

    /// `a + b√r` at `level`, dropping to `a` when `b` vanishes.
    fn make(level: &Level, a: Constructible, b: Constructible) -> Self {
        if b.is_zero() {
            a
        } else {
            Self::quadratic(level.clone(), a, b)
        }
    }

    pub(super) fn repr(&self) -> &Repr {
        &self.0.repr
    }

    pub(super) fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    fn level(&self) -> Option<&Level> {
        match &self.0.repr {
            Repr::Rational(_) => None,
            Repr::Quadratic { level, .. } => Some(level),
        }
    }

    /// Number of extension levels below and including this value's own.
    pub fn depth(&self) -> usize {
        tower::depth(self.level())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0.repr {
            Repr::Rational(r) => Some(r),
            Repr::Quadratic { .. } => None,
        }
    }

    /// Exact zero test; sound because every level is a proper extension.
    pub fn is_zero(&self) -> bool {
        matches!(&self.0.repr, Repr::Rational(r) if r.is_zero())
    }

    fn is_one(&self) -> bool {
        matches!(&self.0.repr, Repr::Rational(r) if r.is_one())
    }

    /// Identical representation over the identical tower.
    pub(super) fn same_repr(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash {
            return false;
        }
        match (&self.0.repr, &other.0.repr) {
            (Repr::Rational(x), Repr::Rational(y)) => x == y,
            (
                Repr::Quadratic { level, a, b },
                Repr::Quadratic {
                    level: l2,
                    a: a2,
                    b: b2,
                },
            ) => Arc::ptr_eq(level, l2) && a.same_repr(a2) && b.same_repr(b2),
            _ => false,
        }
    }

    fn decompose(&self, top: &Level) -> (Constructible, Constructible) {
        match &self.0.repr {
            Repr::Quadratic { level, a, b } if Arc::ptr_eq(level, top) => (a.clone(), b.clone()),
            _ => (self.clone(), Self::zero()),
        }
    }

    fn deeper<'a>(x: &'a Self, y: &'a Self) -> &'a Level {
        match (x.level(), y.level()) {
            (Some(lx), Some(ly)) => {
                if lx.depth >= ly.depth {
                    lx
                } else {
                    ly
                }
            }
            (Some(l), None) | (None, Some(l)) => l,
            (None, None) => unreachable!("rational operands have no level"),
        }
    }

    // Arithmetic on operands whose towers are prefixes of one chain.

    pub(super) fn add_chain(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if let (Repr::Rational(x), Repr::Rational(y)) = (&self.0.repr, &other.0.repr) {
            return Self::from_rational(x + y);
        }
        let top = Self::deeper(self, other);
        let (xa, xb) = self.decompose(top);
        let (ya, yb) = other.decompose(top);
        Self::make(top, xa.add_chain(&ya), xb.add_chain(&yb))
    }

    fn neg_chain(&self) -> Self {
        match &self.0.repr {
            Repr::Rational(x) => Self::from_rational(-x),
            Repr::Quadratic { level, a, b } => {
                Self::quadratic(level.clone(), a.neg_chain(), b.neg_chain())
            }
        }
    }

    pub(super) fn mul_chain(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if let (Repr::Rational(x), Repr::Rational(y)) = (&self.0.repr, &other.0.repr) {
            return Self::from_rational(x * y);
        }
        let top = Self::deeper(self, other);
        let (xa, xb) = self.decompose(top);
        let (ya, yb) = other.decompose(top);
        if xb.is_zero() {
            return Self::make(top, self.mul_chain(&ya), self.mul_chain(&yb));
        }
        if yb.is_zero() {
            return Self::make(top, xa.mul_chain(other), xb.mul_chain(other));
        }
        let r = &top.radicand;
        let real = xa.mul_chain(&ya).add_chain(&xb.mul_chain(&yb).mul_chain(r));
        let irrational = xa.mul_chain(&yb).add_chain(&xb.mul_chain(&ya));
        Self::make(top, real, irrational)
    }

    /// `a² − b²r` for a value at `top`: the product with its conjugate.
    fn conjugate_product(a: &Self, b: &Self, top: &Level) -> Self {
        a.mul_chain(a)
            .add_chain(&b.mul_chain(b).mul_chain(&top.radicand).neg_chain())
    }

    fn inv_chain(&self) -> Result<Self, FieldError> {
        match &self.0.repr {
            Repr::Rational(x) => {
                if x.is_zero() {
                    Err(FieldError::DivisionByZero)
                } else {
                    Ok(Self::from_rational(x.recip()))
                }
            }
            Repr::Quadratic { level, a, b } => {
                let d = Self::conjugate_product(a, b, level).inv_chain()?;
                Ok(Self::make(level, a.mul_chain(&d), b.mul_chain(&d).neg_chain()))
            }
        }
    }

    /// Rewrites both operands into one chain.
    fn unify(&self, other: &Self) -> (Self, Self) {
        let (lx, ly) = (self.level(), other.level());
        if is_prefix(lx, ly) || is_prefix(ly, lx) {
            return (self.clone(), other.clone());
        }
        let merged = merge(lx.unwrap(), ly.unwrap());
        (self.clone(), merged.embed(other))
    }

    pub fn arith(kind: ArithKind, x: &Self, y: &Self) -> Result<Self, FieldError> {
        Ok(match kind {
            ArithKind::Add => x + y,
            ArithKind::Sub => x - y,
            ArithKind::Mul => x * y,
            ArithKind::Div => x.checked_div(y)?,
            ArithKind::Neg => -x,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        let (x, y) = self.unify(other);
        Ok(x.mul_chain(&y.inv_chain()?))
    }

    pub fn recip(&self) -> Result<Self, FieldError> {
        self.inv_chain()
    }

    /// Norm down to the rationals, relative to the chain ending at `top`.
    fn norm(&self, top: Option<&Level>) -> BigRational {
        match top {
            None => self
                .as_rational()
                .expect("value outside its chain")
                .clone(),
            Some(level) => {
                let (a, b) = self.decompose(level);
                let reduced = if b.is_zero() {
                    a.mul_chain(&a)
                } else {
                    Self::conjugate_product(&a, &b, level)
                };
                reduced.norm(level.base.as_ref())
            }
        }
    }

    /// Nonnegative square root lying in the chain ending at `top`, if any.
    /// `self` must lie in that chain and be nonnegative.
    pub(super) fn sqrt_in(&self, top: Option<&Level>) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let Some(level) = top else {
            return rational_sqrt_exact(self.as_rational()?).map(Self::from_rational);
        };
        if !is_rational_square(&self.norm(top)) {
            return None;
        }
        let base = level.base.as_ref();
        let (a, b) = self.decompose(level);
        if b.is_zero() {
            if let Some(root) = a.sqrt_in(base) {
                return Some(root);
            }
            // √a = s·√r with s = √(a/r)
            let quotient = a.mul_chain(&level.radicand.inv_chain().ok()?);
            return quotient
                .sqrt_in(base)
                .map(|s| Self::make(level, Self::zero(), s));
        }
        let n = Self::conjugate_product(&a, &b, level).sqrt_in(base)?;
        let half = Self::from_rational(BigRational::new(1.into(), 2.into()));
        for candidate in [n.clone(), n.neg_chain()] {
            let u_sq = a.add_chain(&candidate).mul_chain(&half);
            if u_sq.is_zero() || u_sq.sign() == Sign::Negative {
                continue;
            }
            if let Some(u) = u_sq.sqrt_in(base) {
                let v = b.mul_chain(&half).mul_chain(&u.inv_chain().ok()?);
                let root = Self::make(level, u, v);
                return Some(if root.sign() == Sign::Negative {
                    root.neg_chain()
                } else {
                    root
                });
            }
        }
        None
    }

    /// Exact nonnegative square root. Adds an extension level only when the
    /// value is not already a square in its own tower.
    pub fn sqrt(&self) -> Result<Self, FieldError> {
        match self.sign() {
            Sign::Negative => return Err(FieldError::NegativeRadicand),
            Sign::Zero => return Ok(Self::zero()),
            Sign::Positive => {}
        }
        if let Some(r) = self.as_rational() {
            let (coefficient, kernel) = split_square_factor(r);
            if kernel.is_one() {
                return Ok(Self::from_rational(coefficient));
            }
            let level = adjoin(None, Self::from_rational(BigRational::from_integer(kernel)));
            return Ok(Self::make(
                &level,
                Self::zero(),
                Self::from_rational(coefficient),
            ));
        }
        if let Some(root) = self.sqrt_in(self.level()) {
            return Ok(root);
        }
        let level = adjoin(self.level(), self.clone());
        Ok(Self::generator(&level))
    }

    /// Sign decided by interval refinement; zero by the canonical form.
    pub fn sign(&self) -> Sign {
        interval::sign(self)
    }

    /// Sign decided purely algebraically by recursion on `a + b√r`.
    pub fn algebraic_sign(&self) -> Sign {
        match &self.0.repr {
            Repr::Rational(r) => Sign::of_ordering(r.cmp(&BigRational::zero())),
            Repr::Quadratic { level, a, b } => {
                let sa = a.algebraic_sign();
                let sb = b.algebraic_sign();
                if sa == Sign::Zero || sa == sb {
                    return if sa == Sign::Zero { sb } else { sa };
                }
                sa.times(Self::conjugate_product(a, b, level).algebraic_sign())
            }
        }
    }

    pub fn equals(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    pub fn approx_interval(&self, precision_bits: u32) -> Interval {
        interval::approx_interval(self, precision_bits)
    }

    /// Correctly rounded (half-even) decimal with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal::to_decimal(self, digits, decimal::Rounding::HalfEven)
    }

    /// Truncated decimal expansion with `digits` fractional digits.
    pub fn to_decimal_truncated(&self, digits: usize) -> String {
        decimal::to_decimal(self, digits, decimal::Rounding::Truncate)
    }

    pub fn to_f64(&self) -> f64 {
        self.approx_interval(60).midpoint_f64()
    }

    pub fn tower_radicands(&self) -> Vec<Constructible> {
        tower::chain(self.level())
            .into_iter()
            .map(|l| l.radicand.clone())
            .collect()
    }
}

impl fmt::Display for Constructible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.repr {
            Repr::Rational(r) => write!(f, "{r}"),
            Repr::Quadratic { level, a, b } => {
                if !a.is_zero() {
                    write!(f, "({a} + ")?;
                }
                if b.is_one() {
                    write!(f, "sqrt({})", level.radicand)?;
                } else {
                    write!(f, "{b}*sqrt({})", level.radicand)?;
                }
                if !a.is_zero() {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Constructible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} ≈ {}", self.to_decimal(12))
    }
}

impl PartialEq for Constructible {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for Constructible {}

impl PartialOrd for Constructible {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Constructible {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self - other).sign() {
            Sign::Negative => std::cmp::Ordering::Less,
            Sign::Zero => std::cmp::Ordering::Equal,
            Sign::Positive => std::cmp::Ordering::Greater,
        }
    }
}

impl From<BigRational> for Constructible {
    fn from(value: BigRational) -> Self {
        Self::from_rational(value)
    }
}

impl From<i64> for Constructible {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

impl<'a> Add<&'a Constructible> for &'a Constructible {
    type Output = Constructible;
    fn add(self, rhs: &'a Constructible) -> Constructible {
        let (x, y) = self.unify(rhs);
        x.add_chain(&y)
    }
}

impl<'a> Sub<&'a Constructible> for &'a Constructible {
    type Output = Constructible;
    fn sub(self, rhs: &'a Constructible) -> Constructible {
        let (x, y) = self.unify(rhs);
        x.add_chain(&y.neg_chain())
    }
}

impl<'a> Mul<&'a Constructible> for &'a Constructible {
    type Output = Constructible;
    fn mul(self, rhs: &'a Constructible) -> Constructible {
        let (x, y) = self.unify(rhs);
        x.mul_chain(&y)
    }
}

/// Panics on division by zero; use [`Constructible::checked_div`] to handle it.
impl<'a> Div<&'a Constructible> for &'a Constructible {
    type Output = Constructible;
    fn div(self, rhs: &'a Constructible) -> Constructible {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &Constructible {
    type Output = Constructible;
    fn neg(self) -> Constructible {
        self.neg_chain()
    }
}

macro_rules! owned_ops {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for Constructible {
            type Output = Constructible;
            fn $method(self, rhs: Constructible) -> Constructible {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Constructible> for Constructible {
            type Output = Constructible;
            fn $method(self, rhs: &'a Constructible) -> Constructible {
                (&self).$method(rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Constructible {
    type Output = Constructible;
    fn neg(self) -> Constructible {
        self.neg_chain()
    }
}

impl Zero for Constructible {
    fn zero() -> Self {
        Constructible::zero()
    }
    fn is_zero(&self) -> bool {
        Constructible::is_zero(self)
    }
}

impl One for Constructible {
    fn one() -> Self {
        Constructible::one()
    }
}

impl Scalar for Constructible {
    fn from_rational(value: &BigRational) -> Self {
        Constructible::from_rational(value.clone())
    }

    fn sqrt(&self) -> Result<Self, FieldError> {
        Constructible::sqrt(self)
    }

    fn sign(&self) -> Sign {
        Constructible::sign(self)
    }

    fn to_f64(&self) -> f64 {
        Constructible::to_f64(self)
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.checked_div(rhs)
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn same_value(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Constructible {
        Constructible::from_integer(n)
    }

    fn q(p: i64, d: i64) -> Constructible {
        Constructible::ratio(p, d).unwrap()
    }

    fn phi() -> Constructible {
        (c(1) + c(5).sqrt().unwrap()) / c(2)
    }

    #[test]
    fn ratio_rejects_zero_denominator() {
        assert_eq!(Constructible::ratio(1, 0).unwrap_err(), FieldError::DivisionByZero);
        assert!(Constructible::ratio(0, 5).unwrap().is_zero());
        assert_eq!(Constructible::ratio(12, 10).unwrap(), q(6, 5));
    }

    #[test]
    fn golden_ratio_identity() {
        let p = phi();
        assert!((&p * &p - &p - c(1)).is_zero());
        assert_eq!(c(1) + phi(), (c(3) + c(5).sqrt().unwrap()) / c(2));
    }

    #[test]
    fn sqrt_of_perfect_squares_stays_rational() {
        assert_eq!(q(9, 4).sqrt().unwrap().as_rational(), Some(&BigRational::new(3.into(), 2.into())));
        assert_eq!(c(0).sqrt().unwrap(), c(0));
        let ce = q(5, 4).sqrt().unwrap();
        assert_eq!(ce, c(5).sqrt().unwrap() / c(2));
        assert_eq!(c(-1).sqrt().unwrap_err(), FieldError::NegativeRadicand);
    }

    #[test]
    fn denests_square_of_tower_element() {
        // (1 + √5)² = 6 + 2√5
        let s5 = c(5).sqrt().unwrap();
        let x = c(6) + c(2) * s5.clone();
        let root = x.sqrt().unwrap();
        assert_eq!(root.depth(), 1);
        assert_eq!(root, c(1) + s5);
    }

    #[test]
    fn independent_roots_merge() {
        let s2 = c(2).sqrt().unwrap();
        let s3 = c(3).sqrt().unwrap();
        let s6 = c(6).sqrt().unwrap();
        assert_eq!(&s2 * &s3, s6);
        assert_eq!((&s2 * &s3 - &s6).depth(), 0);
        let s8 = c(8).sqrt().unwrap();
        assert_eq!(s8, c(2) * s2);
    }

    #[test]
    fn division_and_inverse() {
        let s5 = c(5).sqrt().unwrap();
        let x = c(3) / s5.clone();
        assert_eq!(&x * &s5, c(3));
        assert_eq!(c(1).checked_div(&(s5.clone() - s5)).unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn dixon_radicand_identity() {
        let s5 = c(5).sqrt().unwrap();
        let m = c(3) / s5;
        let lhs = &m * &(&m + &c(1));
        assert_eq!(lhs, q(6, 5) * (c(1) + phi()));
    }

    #[test]
    fn fourth_root_radicand() {
        let s5 = c(5).sqrt().unwrap();
        let li = (c(3) / s5.clone()).sqrt().unwrap();
        let dg = c(7).sqrt().unwrap() / c(5);
        let prod = (&li - &dg) * (&li + &dg);
        assert_eq!(prod, (c(15) * s5 - c(7)) / c(25));
        assert_eq!((&li - &dg).sign(), Sign::Positive);
    }

    #[test]
    fn signs_agree_with_algebraic_recursion() {
        let s5 = c(5).sqrt().unwrap();
        let vals = [
            c(15) * s5.clone() - c(7),
            phi() * phi() - phi() - c(1),
            c(2) - s5.clone(),
            q(-1, 3) + s5.clone() / c(7),
        ];
        for v in vals {
            assert_eq!(v.sign(), v.algebraic_sign(), "{v}");
        }
    }
}
