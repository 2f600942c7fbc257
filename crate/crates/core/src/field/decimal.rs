//! Decimal output driven by interval refinement, with exact boundary checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::constructible::Constructible;
use super::interval::enclose_abs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    HalfEven,
    Truncate,
    Floor,
}

/// A real value that can be enclosed to any absolute width.
pub trait Enclosure {
    /// `(lo, hi, w)` with `lo·2^-w ≤ value ≤ hi·2^-w` and `hi − lo ≤ 2^(w−bits)`.
    fn enclose(&self, bits: u32) -> (BigInt, BigInt, u32);

    /// Exact test `value == r`.
    fn equals_rational(&self, r: &BigRational) -> bool;
}

impl Enclosure for Constructible {
    fn enclose(&self, bits: u32) -> (BigInt, BigInt, u32) {
        enclose_abs(self, bits)
    }

    fn equals_rational(&self, r: &BigRational) -> bool {
        (self - &Constructible::from_rational(r.clone())).is_zero()
    }
}

const MAX_BITS: u32 = 1 << 20;

/// `floor(value·10^digits + offset)` where offset is 0 or 1/2, together with
/// whether the argument of the floor is exactly an integer.
fn floor_scaled<E: Enclosure + ?Sized>(e: &E, digits: usize, half: bool) -> (BigInt, bool) {
    let pow = BigInt::from(10).pow(digits as u32);
    let mut bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32;
    let mut ruled_out: Option<BigInt> = None;
    let boundary_value = |m: &BigInt| {
        // value == (m − offset)/10^digits
        let twice = BigInt::from(2) * m - if half { BigInt::one() } else { BigInt::zero() };
        BigRational::new(twice, BigInt::from(2) * &pow)
    };
    loop {
        let (lo, hi, w) = e.enclose(bits);
        // scaled by 2^(w+1): value·10^digits·2 + half·1, all over 2^(w+1)
        let offset = if half { BigInt::one() << w } else { BigInt::zero() };
        let l: BigInt = &lo * &pow * 2 + &offset;
        let h: BigInt = &hi * &pow * 2 + &offset;
        let denom = BigInt::one() << (w + 1);
        let kl = l.div_floor(&denom);
        let kh = h.div_floor(&denom);
        if kl == kh {
            let exact = l == &kl * &denom && e.equals_rational(&boundary_value(&kl));
            return (kl, exact);
        }
        if kh == &kl + 1 && ruled_out.as_ref() != Some(&kh) {
            if e.equals_rational(&boundary_value(&kh)) {
                return (kh, true);
            }
            ruled_out = Some(kh);
        }
        bits *= 2;
        assert!(bits <= MAX_BITS, "internal defect: decimal refinement did not converge");
    }
}

/// Rounds `value·10^digits` to an integer.
pub fn round_scaled<E: Enclosure + ?Sized>(e: &E, digits: usize, mode: Rounding) -> BigInt {
    match mode {
        Rounding::Floor => floor_scaled(e, digits, false).0,
        Rounding::Truncate => {
            let (k, exact) = floor_scaled(e, digits, false);
            if k.is_negative() && !exact {
                k + 1
            } else {
                k
            }
        }
        Rounding::HalfEven => {
            let (k, tie) = floor_scaled(e, digits, true);
            if tie && k.is_odd() {
                k - 1
            } else {
                k
            }
        }
    }
}

/// Formats the integer `k` as `k·10^-digits`.
pub fn format_scaled(k: &BigInt, digits: usize, negative_zero: bool) -> String {
    let negative = k.is_negative() || (negative_zero && k.is_zero());
    let mag = k.abs().to_string();
    let padded = if mag.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int, frac) = padded.split_at(padded.len() - digits);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(int);
    if digits > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

pub fn decimal_string<E: Enclosure + ?Sized>(e: &E, digits: usize, mode: Rounding) -> String {
    format_scaled(&round_scaled(e, digits, mode), digits, false)
}

pub(super) fn to_decimal(x: &Constructible, digits: usize, mode: Rounding) -> String {
    if let Some(r) = x.as_rational() {
        if r.is_zero() {
            return format_scaled(&BigInt::zero(), digits, false);
        }
    }
    decimal_string(x, digits, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Constructible {
        Constructible::ratio(p, d).unwrap()
    }

    /// Schoolbook long division of p/q, truncated.
    fn long_division(p: u64, q: u64, digits: usize) -> String {
        let mut out = format!("{}.", p / q);
        let mut rem = p % q;
        for _ in 0..digits {
            rem *= 10;
            out.push(char::from(b'0' + (rem / q) as u8));
            rem %= q;
        }
        out
    }

    #[test]
    fn zu_fraction_digits() {
        assert_eq!(long_division(355, 113, 8), "3.14159292");
        // 3.14159292… rounds to 3.1415929 at seven places
        assert_eq!(q(355, 113).to_decimal(7), "3.1415929");
        assert_eq!(q(355, 113).to_decimal_truncated(8), long_division(355, 113, 8));
    }

    #[test]
    fn exact_ties_round_half_even() {
        assert_eq!(q(1, 2).to_decimal(3), "0.500");
        assert_eq!(q(1, 8).to_decimal(2), "0.12");
        assert_eq!(q(3, 8).to_decimal(2), "0.38");
        assert_eq!(q(5, 2).to_decimal(0), "2");
        assert_eq!(q(-5, 2).to_decimal(0), "-2");
        assert_eq!(q(-1, 3).to_decimal(2), "-0.33");
        assert_eq!(q(-1, 2).to_decimal_truncated(0), "0");
    }

    #[test]
    fn irrational_on_exact_integer_boundary() {
        let s = Constructible::from_integer(2).sqrt().unwrap();
        let two = &s * &s;
        assert_eq!(two.to_decimal_truncated(5), "2.00000");
        let x = Constructible::from_integer(5).sqrt().unwrap();
        assert_eq!(x.to_decimal(10), "2.2360679775");
    }

    #[test]
    fn formats() {
        assert_eq!(format_scaled(&BigInt::from(-5), 3, false), "-0.005");
        assert_eq!(format_scaled(&BigInt::from(31416), 4, false), "3.1416");
        assert_eq!(format_scaled(&BigInt::from(7), 0, false), "7");
    }
}
