//! Field laws on random elements of random quadratic towers, with a 200-bit
//! float evaluation of the same elements as an independent reference.

mod common;

use circlesquare::{Constructible, Scalar, Sign};
use common::{near, sample, seeds};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms((depth, raw) in seeds()) {
        let (xs, depth) = sample(depth, &raw);
        let (x, y, z) = (&xs[0].0, &xs[1].0, &xs[2].0);
        prop_assert!(x.depth() <= depth);
        prop_assert_eq!(x + y, y + x);
        prop_assert_eq!(x * y, y * x);
        prop_assert_eq!(&(x + y) + z, x + &(y + z));
        prop_assert_eq!(&(x * y) * z, x * &(y * z));
        prop_assert_eq!(x * &(y + z), &(x * y) + &(x * z));
        prop_assert!((x - x).is_zero());
        prop_assert_eq!(x + &Constructible::zero(), x.clone());
        prop_assert_eq!(x * &Constructible::one(), x.clone());
        prop_assert_eq!(-(-x.clone()), x.clone());
        if !x.is_zero() {
            prop_assert_eq!(x * &x.recip().unwrap(), Constructible::one());
            prop_assert_eq!(&(y / x) * x, y.clone());
        } else {
            prop_assert!(x.recip().is_err());
        }
    }

    #[test]
    fn square_roots((depth, raw) in seeds()) {
        let (xs, _) = sample(depth, &raw);
        let x = &xs[0].0;
        let sq = x * x;
        let root = sq.sqrt().unwrap();
        prop_assert!(root.sign() != Sign::Negative);
        prop_assert_eq!(&root * &root, sq.clone());
        let w = &sq + &Constructible::one();
        let r = w.sqrt().unwrap();
        prop_assert_eq!(&r * &r, w);
        if x.sign() == Sign::Negative {
            prop_assert_eq!(root, -x.clone());
            prop_assert!(x.sqrt().is_err());
        } else {
            prop_assert_eq!(root, x.clone());
            let s = x.sqrt().unwrap();
            prop_assert_eq!(&s * &s, x.clone());
        }
    }

    #[test]
    fn signs_and_digits_match_floats((depth, raw) in seeds()) {
        let (xs, _) = sample(depth, &raw);
        for (x, f) in &xs {
            prop_assert!(near(x, f));
            prop_assert_eq!(x.sign(), x.algebraic_sign());
            if !x.is_zero() {
                let fs = f.sign();
                // the float may only be wrong about values within its own error
                if !near(&Constructible::zero(), f) {
                    prop_assert_eq!(x.sign(), fs);
                }
            }
            let digits = 30;
            let dec: f64 = x.to_decimal(digits).parse().unwrap();
            prop_assert!((dec - f.to_f64()).abs() <= 1e-12 * (1.0 + dec.abs()));
            // truncation at more digits refines truncation at fewer
            let coarse = x.to_decimal_truncated(10);
            let fine = x.to_decimal_truncated(25);
            if x.sign() != Sign::Negative {
                prop_assert!(fine.starts_with(&coarse));
            }
        }
    }
}

