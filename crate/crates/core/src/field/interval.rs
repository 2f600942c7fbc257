//! Dyadic enclosures of constructible values.

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::constructible::{Constructible, Repr};
use super::rational::{ceil_div, floor_div};
use crate::scalar::Sign;

/// Closed interval `[lo, hi]·2^-scale` known to contain a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    scale: u32,
    precision_bits: u32,
}

impl Interval {
    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::from(1) << self.scale)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::from(1) << self.scale)
    }

    pub fn width(&self) -> BigRational {
        self.hi() - self.lo()
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        &self.lo() <= value && value <= &self.hi()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo() <= self.lo() && self.hi() <= other.hi()
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((self.lo() + self.hi()) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

fn isqrt_floor(n: &BigInt) -> BigInt {
    if n.is_positive() {
        n.sqrt()
    } else {
        BigInt::zero()
    }
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = isqrt_floor(n);
    if &(&r * &r) < n {
        r + 1
    } else {
        r
    }
}

/// `[lo, hi]·2^-w` enclosing `x`, computed bottom-up at fixed point `w`.
pub(super) fn enclose(x: &Constructible, w: u32) -> (BigInt, BigInt) {
    match x.repr() {
        Repr::Rational(r) => {
            let n = r.numer() << w;
            (floor_div(&n, r.denom()), ceil_div(&n, r.denom()))
        }
        Repr::Quadratic { level, a, b } => {
            let (alo, ahi) = enclose(a, w);
            let (blo, bhi) = enclose(b, w);
            let (slo, shi) = match level.cached_sqrt(w) {
                Some(bounds) => bounds,
                None => {
                    let (rlo, rhi) = enclose(&level.radicand, w);
                    let bounds = (isqrt_floor(&(rlo << w)), isqrt_ceil(&(rhi << w)));
                    level.store_sqrt(w, bounds.clone());
                    bounds
                }
            };
            let (plo, phi) = if !blo.is_negative() {
                (&blo * &slo, &bhi * &shi)
            } else if !bhi.is_positive() {
                (&blo * &shi, &bhi * &slo)
            } else {
                (&blo * &shi, &bhi * &shi)
            };
            (alo + (plo >> w), ahi - ((-phi) >> w))
        }
    }
}

/// Enclosure of absolute width at most `2^-bits`, as `(lo, hi, w)`.
pub(super) fn enclose_abs(x: &Constructible, bits: u32) -> (BigInt, BigInt, u32) {
    let mut guard = 16 + 8 * x.depth() as u32;
    loop {
        let w = bits + guard;
        let (lo, hi) = enclose(x, w);
        if (&hi - &lo) <= (BigInt::from(1) << (w - bits)) {
            return (lo, hi, w);
        }
        guard *= 2;
        assert!(
            w < 1 << 22,
            "internal defect: enclosure refinement did not converge"
        );
    }
}

const SIGN_START_BITS: u32 = 64;
const SIGN_MAX_BITS: u32 = 1 << 16;

pub(super) fn sign(x: &Constructible) -> Sign {
    if let Some(r) = x.as_rational() {
        return match r.numer().sign() {
            BigSign::Minus => Sign::Negative,
            BigSign::NoSign => Sign::Zero,
            BigSign::Plus => Sign::Positive,
        };
    }
    // b ≠ 0 at a proper level: the value is nonzero.
    let mut bits = SIGN_START_BITS;
    while bits <= SIGN_MAX_BITS {
        let (lo, hi, _) = enclose_abs(x, bits);
        if lo.is_positive() {
            return Sign::Positive;
        }
        if hi.is_negative() {
            return Sign::Negative;
        }
        bits *= 2;
    }
    panic!("internal defect: sign of a nonzero value unresolved at {SIGN_MAX_BITS} bits");
}

/// Returns an interval of width at most `2^(1-p)` snapped outward to the
/// `2^-(p+2)` grid with a two-cell margin, so that raising `p` always yields a
/// sub-interval.
pub(super) fn approx_interval(x: &Constructible, precision_bits: u32) -> Interval {
    let p = precision_bits.max(1);
    if x.is_zero() {
        return Interval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            scale: 0,
            precision_bits: p,
        };
    }
    let (lo, hi, w) = enclose_abs(x, p + 4);
    let shift = w - (p + 2);
    let glo = (lo >> shift) - 2;
    let ghi = -((-hi) >> shift) + 2;
    Interval {
        lo: glo,
        hi: ghi,
        scale: p + 2,
        precision_bits: p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s5() -> Constructible {
        Constructible::from_integer(5).sqrt().unwrap()
    }

    fn bound(p: u32, v: &BigRational) -> BigRational {
        let one = BigRational::from_integer(1.into());
        let m = if v.abs() > one { v.abs() } else { one };
        m * BigRational::new(2.into(), BigInt::from(1) << p)
    }

    #[test]
    fn sqrt5_enclosure() {
        let iv = s5().approx_interval(20);
        let lower = BigRational::new(22360679.into(), 10000000.into());
        let upper = BigRational::new(22360680.into(), 10000000.into());
        assert!(iv.lo() <= upper && iv.hi() >= lower);
        assert!(iv.width() <= bound(20, &lower));
        assert!(iv.width() <= BigRational::new(3.into(), BigInt::from(1) << 19));
    }

    #[test]
    fn zero_is_exact() {
        let iv = Constructible::zero().approx_interval(7);
        assert_eq!(iv.lo(), BigRational::zero());
        assert_eq!(iv.hi(), BigRational::zero());
    }

    #[test]
    fn golden_ratio_enclosure() {
        let phi = (Constructible::one() + s5()) / Constructible::from_integer(2);
        let iv = phi.approx_interval(50);
        let v = BigRational::new(16180339887i64.into(), 10000000000i64.into());
        let v2 = BigRational::new(16180339888i64.into(), 10000000000i64.into());
        assert!(iv.lo() < v2 && iv.hi() > v);
        assert!(iv.width() <= bound(50, &v));
    }

    #[test]
    fn nested_intervals() {
        let x = (Constructible::from_integer(3) / s5()).sqrt().unwrap() - s5();
        let mut prev = x.approx_interval(1);
        for p in 2..80 {
            let next = x.approx_interval(p);
            assert!(next.is_subset_of(&prev), "p = {p}");
            prev = next;
        }
    }
}
