//! Exact arithmetic: ℚ(i), sparse polynomials, polynomial matrices.

pub mod gauss;
pub mod gcd;
pub mod matrix;
pub mod parse;
pub mod poly;

pub use gauss::GaussRational;
pub use gcd::gcd;
pub use matrix::{resultant, PolyMatrix};
pub use parse::{parse_poly, parse_poly_auto};
pub use poly::{vars_of, Monomial, MultiPoly, Vars};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariableAt { name: String, pos: usize },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("zero polynomial has no order")]
    ZeroPolynomial,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}
