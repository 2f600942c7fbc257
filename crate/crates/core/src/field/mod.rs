//! Exact constructible numbers.
//!
//! A [`Constructible`] is an element of a tower of real quadratic extensions of the
//! rationals, stored recursively as `a + b√r`. Every extension level is proper
//! (its radicand is positive and not a square in the level below), so a value is
//! zero exactly when its canonical representation is the rational zero. Signs of
//! nonzero values and decimal expansions come from dyadic interval enclosures.

mod constructible;
mod decimal;
mod interval;
mod rational;
mod tower;

use thiserror::Error;

pub use constructible::{ArithKind, Constructible};
pub use decimal::{decimal_string, format_scaled, round_scaled, Enclosure, Rounding};
pub use interval::Interval;
pub use rational::{parse_rational, rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative radicand")]
    NegativeRadicand,
}
