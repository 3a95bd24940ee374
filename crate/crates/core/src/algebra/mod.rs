//! Scalars, multivariate polynomials, and determinants.

mod field;
mod matrix;
mod parse;
mod polynomial;

use thiserror::Error;

pub use field::{Field, Scalar, MAX_PRIME};
pub(crate) use field::binary_mul;
pub use matrix::{
    determinant, float_determinant, rational_determinant, scalar_determinant, PolyMatrix,
    MAX_SIZE,
};
pub use polynomial::{Monomial, Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("unsupported field {0}")]
    InvalidField(String),
    #[error("{value} is not an element of {field}")]
    InvalidElement { field: Field, value: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable {0:?} has no assigned value")]
    MissingVariable(Var),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix of size {0} exceeds the supported maximum")]
    TooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
