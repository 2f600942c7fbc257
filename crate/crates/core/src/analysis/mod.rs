//! Efficiency metrics of constructions and accuracy of π approximations.

mod metrics;
mod pi;

pub use metrics::{metrics, metrics_with, MetricsError, MetricsReport, Thresholds};
pub use pi::{OverPi, Pi};

use serde::Serialize;
use thiserror::Error;

use crate::field::{decimal_string, Constructible, Rounding};
use crate::scalar::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("value must be positive")]
pub struct NonPositive;

/// How close a value is to π.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub ratio_digits: usize,
    /// `v/π` truncated to `ratio_digits` fractional digits.
    pub ratio_to_pi: String,
    /// `v/π` rounded half-even to `ratio_digits` fractional digits.
    pub ratio_rounded: String,
    /// Leading fractional digits shared by the truncated expansions of `v` and π.
    pub places_correct: usize,
    /// Truncated expansion of `v` to 20 digits, or one digit past the first
    /// disagreement with π if that is later.
    pub value_decimal: String,
    /// Truncated expansion of π to as many digits.
    pub pi_decimal: String,
}

/// Fractional digits on which two truncated expansions agree; zero if the
/// integer parts differ.
pub fn agreeing_places(a: &str, b: &str) -> usize {
    let (ai, af) = a.split_once('.').unwrap_or((a, ""));
    let (bi, bf) = b.split_once('.').unwrap_or((b, ""));
    if ai != bi {
        return 0;
    }
    af.chars().zip(bf.chars()).take_while(|(x, y)| x == y).count()
}

pub fn pi_error(v: &Constructible, ratio_digits: usize) -> Result<ErrorReport, NonPositive> {
    if v.sign() != Sign::Positive {
        return Err(NonPositive);
    }
    let mut digits = 24;
    let (places, value_decimal, pi_decimal) = loop {
        let vd = v.to_decimal_truncated(digits);
        let pd = decimal_string(&Pi, digits, Rounding::Truncate);
        let places = agreeing_places(&vd, &pd);
        if places < digits {
            let shown = (places + 1).max(20);
            break (
                places,
                v.to_decimal_truncated(shown),
                decimal_string(&Pi, shown, Rounding::Truncate),
            );
        }
        digits *= 2;
    };
    let ratio = OverPi(v);
    Ok(ErrorReport {
        ratio_digits,
        ratio_to_pi: decimal_string(&ratio, ratio_digits, Rounding::Truncate),
        ratio_rounded: decimal_string(&ratio, ratio_digits, Rounding::HalfEven),
        places_correct: places,
        value_decimal,
        pi_decimal,
    })
}

/// Reports as `key: value` lines in a fixed order, or as a JSON object.
pub trait TextReport: Serialize {
    fn fields(&self) -> Vec<(&'static str, String)>;

    fn to_text(&self) -> String {
        self.fields()
            .into_iter()
            .map(|(k, v)| format!("{k}: {v}\n"))
            .collect()
    }

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

impl TextReport for ErrorReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("ratio_to_pi", self.ratio_to_pi.clone()),
            ("ratio_rounded", self.ratio_rounded.clone()),
            ("ratio_digits", self.ratio_digits.to_string()),
            ("places_correct", self.places_correct.to_string()),
            ("value_decimal", self.value_decimal.clone()),
            ("pi_decimal", self.pi_decimal.clone()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agreement_counts() {
        assert_eq!(agreeing_places("3.1415929", "3.1415926"), 6);
        assert_eq!(agreeing_places("2.9999", "3.0000"), 0);
        assert_eq!(agreeing_places("3.14", "3.14"), 2);
    }

    #[test]
    fn rejects_nonpositive() {
        assert_eq!(pi_error(&Constructible::zero(), 6), Err(NonPositive));
        assert_eq!(pi_error(&Constructible::from_integer(-3), 6), Err(NonPositive));
    }

    #[test]
    fn rational_ratio() {
        let r = pi_error(&Constructible::ratio(355, 113).unwrap(), 8).unwrap();
        assert_eq!(r.places_correct, 6);
        assert_eq!(r.ratio_to_pi, "1.00000008");
        assert_eq!(r.value_decimal, "3.14159292035398230088");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["places_correct"], 6);
        assert_eq!(json["ratio_to_pi"], "1.00000008");
    }
}
