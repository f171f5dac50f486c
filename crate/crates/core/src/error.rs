use thiserror::Error;

/// Errors raised by the algebraic operations.
///
/// Outcomes of the skewability question itself (skewable, not skewable,
/// undecided) are values, see [`crate::solver::SkewStatus`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index ({i}, {j}) out of range for size {size}")]
    IndexOutOfRange { i: usize, j: usize, size: usize },

    #[error("form dimension must be at least 1")]
    EmptyBasis,

    #[error("matrix is singular or nearly singular (sigma_min/sigma_max = {ratio:e})")]
    Singular { ratio: f64 },

    #[error("matrix is not symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("wedge label e{}^e{} appears more than once", .i + 1, .j + 1)]
    DuplicateLabel { i: usize, j: usize },

    #[error("e{}^e{} is not a wedge basis element", .i + 1, .j + 1)]
    InvalidLabel { i: usize, j: usize },

    #[error("every matrix in the set is zero")]
    AllZero,

    #[error("invalid tolerance {0:e}")]
    InvalidTolerance(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
