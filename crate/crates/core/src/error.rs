use thiserror::Error;

use crate::linalg::ComplexMatrix;

/// Errors raised by the toolkit.
///
/// A check that runs to completion and answers "no" is reported through its
/// result struct, not through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (defect {defect:e} exceeds {bound:e})")]
    NonHermitian { defect: f64, bound: f64 },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("matrix has negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("negative power of a matrix whose smallest eigenvalue {min:e} is below threshold {threshold:e}")]
    SingularPower { min: f64, threshold: f64 },

    #[error("input is singular (smallest singular value {0:e})")]
    SingularInput(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("p must be ≥ 1 (got {0})")]
    InvalidExponent(f64),

    #[error("map is not positive (minimum eigenvalue {0:e} on a positive input)")]
    NotPositive(f64),

    #[error("map is not classifiable as a *-isomorphism or *-anti-isomorphism: {0}")]
    NotClassifiable(String),

    #[error("map is not decomposable as W B J: {reason} (defect {defect:e})")]
    NotDecomposable {
        reason: String,
        defect: f64,
        witness: Box<ComplexMatrix>,
    },

    #[error("map is not a Jordan morphism (defect {0:e})")]
    NotJordan(f64),

    #[error("window half-width {0} outside 1..=6")]
    WindowTooLarge(usize),

    #[error("invalid spectral function: {0}")]
    InvalidSpectralFunction(String),

    #[error("shift by {t} leaves no basis element inside a window of half-width {n}")]
    DomainEmpty { t: i32, n: usize },

    #[error("vector has a nonzero coefficient outside the operator domain at basis index {0}")]
    OffDomain(usize),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
