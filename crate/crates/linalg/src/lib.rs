//! Exact linear algebra over `F_p` and `Q`.

pub mod field;
pub mod matrix;
pub mod subspace;

pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::{Combine, Matrix, Rref};
pub use subspace::{subspace_ops, Quotient, Subquotient, Subspace, SubspaceOps};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("vector or subspace not contained in the expected subspace")]
    NotSubspace,
    #[error("parse error: {0}")]
    Parse(String),
}
