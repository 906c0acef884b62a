//! Dense exact linear algebra over any [`Field`](crate::field::Field).
//!
//! Vectors are columns (`Vec<Scalar>`); subspaces are stored as the row
//! span of a reduced row echelon basis, so subspace equality is syntactic.

mod matrix;
mod subspace;

pub use matrix::{perm_matrix, Matrix, MatrixJson};
pub use subspace::{Subspace, SubspaceJson};

use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live in different fields")]
    MixedContext,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T, LinalgError> {
    Err(LinalgError::DimensionMismatch(msg.into()))
}
