//! Exact ruler and compass constructions over the constructible numbers.
//!
//! The geometry kernel and the construction language are generic over a
//! [`Scalar`]; the aliases below fix the exact field and a 200-bit float used
//! for cross-checking.

pub mod analysis;
pub mod catalog;
pub mod field;
pub mod float;
pub mod geometry;
pub mod lang;
pub mod render;
pub mod scalar;

pub use field::{Constructible, FieldError, Interval};
pub use float::{BigFloat, Float200};
pub use scalar::{Scalar, Sign};

pub type ExactPoint = geometry::Point<Constructible>;
pub type ExactLine = geometry::Line<Constructible>;
pub type ExactCircle = geometry::Circle<Constructible>;
pub type ExactWorkspace = lang::Workspace<Constructible>;

pub type FloatPoint = geometry::Point<Float200>;
pub type FloatWorkspace = lang::Workspace<Float200>;
