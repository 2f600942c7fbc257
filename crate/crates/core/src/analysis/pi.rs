//! Reference enclosures of π, used only for error reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{Constructible, Enclosure};

/// `atan(1/x)·2^w` truncated term by term, with the number of terms summed.
fn atan_inv(x: u32, w: u32) -> (BigInt, u64) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << w) / &x;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    (sum, k)
}

/// π by Machin's formula `16·atan(1/5) − 4·atan(1/239)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pi;

impl Pi {
    /// `(lo, hi)` with `lo·2^-w ≤ π ≤ hi·2^-w`.
    fn bounds(w: u32) -> (BigInt, BigInt) {
        let (a, na) = atan_inv(5, w);
        let (b, nb) = atan_inv(239, w);
        let v = a * 16 - b * 4;
        // powers stay within 2 units, so each term within 3; the tail is below 2
        let err = BigInt::from(16 * (3 * na + 4) + 4 * (3 * nb + 4));
        (&v - &err, v + err)
    }
}

impl Enclosure for Pi {
    fn enclose(&self, bits: u32) -> (BigInt, BigInt, u32) {
        let mut guard = 16;
        loop {
            let w = bits + guard;
            let (lo, hi) = Pi::bounds(w);
            if &hi - &lo <= BigInt::one() << guard {
                return (lo, hi, w);
            }
            guard *= 2;
        }
    }

    fn equals_rational(&self, _: &BigRational) -> bool {
        false
    }
}

/// `v/π` for a positive constructible `v`.
pub struct OverPi<'a>(pub &'a Constructible);

impl Enclosure for OverPi<'_> {
    fn enclose(&self, bits: u32) -> (BigInt, BigInt, u32) {
        let mut guard = 8;
        loop {
            let w = bits + guard;
            let (vlo, vhi, wv) = self.0.enclose(w + 4);
            let (plo, phi, wp) = Pi.enclose(w + 4);
            // (v·2^wv)/(π·2^wp) · 2^w, rounded outward
            let shift = w + wp;
            let num_lo: BigInt = vlo << shift;
            let num_hi: BigInt = vhi << shift;
            let den_lo: BigInt = phi << wv;
            let den_hi: BigInt = plo << wv;
            assert!(num_lo.is_positive() && den_hi.is_positive(), "ratio needs v > 0");
            let lo = &num_lo / &den_lo;
            let hi = (&num_hi + &den_hi - 1) / &den_hi;
            if &hi - &lo <= BigInt::one() << guard {
                return (lo, hi, w);
            }
            guard *= 2;
        }
    }

    fn equals_rational(&self, _: &BigRational) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{decimal_string, Rounding};

    #[test]
    fn known_digits() {
        assert_eq!(decimal_string(&Pi, 10, Rounding::Truncate), "3.1415926535");
        assert_eq!(decimal_string(&Pi, 10, Rounding::HalfEven), "3.1415926536");
        assert_eq!(
            decimal_string(&Pi, 50, Rounding::Truncate),
            "3.14159265358979323846264338327950288419716939937510"
        );
    }

    #[test]
    fn enclosure_contract() {
        for bits in [1, 10, 64, 300] {
            let (lo, hi, w) = Pi.enclose(bits);
            assert!(&hi - &lo <= BigInt::one() << (w - bits));
            let three = BigInt::from(3) << w;
            assert!(lo > three && hi < BigInt::from(4) << w);
        }
    }

    #[test]
    fn one_over_pi() {
        let one = Constructible::one();
        assert_eq!(decimal_string(&OverPi(&one), 20, Rounding::Truncate), "0.31830988618379067153");
    }
}
