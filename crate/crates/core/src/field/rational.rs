use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::FieldError;

/// Canonical `p/q`.
pub fn rational(p: i64, q: i64) -> Result<BigRational, FieldError> {
    if q == 0 {
        return Err(FieldError::DivisionByZero);
    }
    Ok(BigRational::new(p.into(), q.into()))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

pub(crate) fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    if &(&root * &root) == n {
        Some(root)
    } else {
        None
    }
}

pub(crate) fn rational_sqrt_exact(x: &BigRational) -> Option<BigRational> {
    let num = integer_sqrt_exact(x.numer())?;
    let den = integer_sqrt_exact(x.denom())?;
    Some(BigRational::new(num, den))
}

pub(crate) fn is_rational_square(x: &BigRational) -> bool {
    rational_sqrt_exact(x).is_some()
}

const SMALL_PRIMES_BOUND: u32 = 2000;

/// Writes a positive rational `x` as `c² · k` with `c` rational and `k` an integer
/// with no square factor below a small trial-division bound.
pub(crate) fn split_square_factor(x: &BigRational) -> (BigRational, BigInt) {
    debug_assert!(x.is_positive());
    // x = p/q = (p·q)/q², so √x = √(p·q)/q
    let mut k = x.numer() * x.denom();
    let mut c = BigInt::one();
    let mut d = 2u32;
    while d < SMALL_PRIMES_BOUND {
        let dd = BigInt::from(d * d);
        if &dd > &k {
            break;
        }
        loop {
            let (quo, rem) = k.div_rem(&dd);
            if rem.is_zero() {
                k = quo;
                c *= d;
            } else {
                break;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if let Some(root) = integer_sqrt_exact(&k) {
        c *= root;
        k = BigInt::one();
    }
    (BigRational::new(c, x.denom().clone()), k)
}

pub(crate) fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

pub(crate) fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}
