//! Relative Q-shaped homological algebra over a field.
//!
//! Shapes are finite windows of Hom-finite k-linear categories presented by
//! quivers with relations; coefficients are finite-dimensional algebras. The
//! crate builds the adjoint functors, objectwise exact structures, canonical
//! totally acyclic complexes and cohomology functors on such windows, and
//! decides trivial objects and weak equivalences from cohomology.

pub mod adjoint;
pub mod algebra;
pub mod cohomology;
pub mod exact;
pub mod homcx;
pub mod oracles;
pub mod qmod;
pub mod random;
pub mod room;
pub mod shape;
pub mod tac;

pub use qshape_linalg as linalg;
pub use qshape_linalg::{Field, FieldSpec, Matrix, PrimeField, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed relation: {0}")]
    MalformedRelation(String),
    #[error("hom spaces do not stabilise within path length {0}")]
    HomInfinite(usize),
    #[error("pseudo-radical not nilpotent within bound {0}")]
    NotNilpotent(usize),
    #[error("identity of `{0}` lies in the arrow ideal")]
    NoStrongRetraction(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("object `{0}` is outside the window")]
    ObjectOutsideWindow(String),
    #[error(
        "window insufficient: support reaches `{object}`; a margin of {needed} arrows is required"
    )]
    WindowInsufficient { object: String, needed: usize },
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("value at `{0}` is not projective in the objectwise structure")]
    NotObjectwiseProjective(String),
    #[error("test module {0} is not relative projective")]
    TestsetNotProjective(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("adjunction check failed: {0}")]
    AdjointMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Linalg(#[from] qshape_linalg::LinalgError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
