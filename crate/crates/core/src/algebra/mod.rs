//! Exact polynomial arithmetic over the rationals and the cubic-surface data model.

mod cubic;
mod parse;
mod poly;

pub use cubic::{cubic_index, CubicForm, ProjTransform, CUBIC_MONOMIALS};
pub use parse::{parse_poly, parse_rational};
pub use poly::{Monomial, MultiPoly, VARS};

use thiserror::Error;

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("not homogeneous of degree 3")]
    NotCubic,
    #[error("cubic form is identically zero")]
    ZeroForm,
    #[error("singular matrix")]
    SingularTransform,
}

/// Parses a cubic form such as `"x^3 + y^3 + z^3 + w^3"`.
pub fn parse_cubic(text: &str) -> Result<CubicForm, AlgebraError> {
    CubicForm::from_poly(&parse_poly(text)?)
}
