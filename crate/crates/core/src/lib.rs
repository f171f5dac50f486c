//! Deciding whether a matrix of 2-forms, or a set of real matrices, can be
//! made skew-symmetric by a single real change of basis, and constructing
//! that change of basis.
//!
//! A matrix `Ω = Σₖ wₖ Sₖ` over the wedge basis `wₖ` of `∧²V` is conjugate to
//! a skew-symmetric matrix exactly when the coefficient matrices `Sₖ` are
//! simultaneously skewable ([`decompose`]). That in turn holds exactly when
//! `SₖA + ASₖᵀ = 0` has a symmetric positive-definite solution `A`, and then
//! `U = √A` does the job ([`solver`]).
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x > tol)` is deliberate: NaN must fail every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod decompose;
pub mod equivalence;
pub mod error;
pub mod exterior;
pub mod golden;
pub mod linalg;
pub mod pipeline;
pub mod solver;

pub use nalgebra;

pub use decompose::{decompose, rank, CoefficientSet, RankReport, DEFAULT_RANK_TOL};
pub use equivalence::{
    orthogonal_factor, preserves_skew_space, OrthogonalFactorReport, SkewPreservation,
};
pub use error::{Error, Result};
pub use exterior::{wedge, ConnectionMatrix, FormBasis, FormMatrix, OneForm, TwoForm, Wedge};
pub use linalg::Matrix;
pub use pipeline::{run_pipeline, PipelineReport, Verdict};
pub use solver::{
    skew_symmetrize, sylvester_null_space, symmetric_sqrt, NullSpaceBasis, Obstruction,
    SkewCertificate, SkewOptions, SkewStatus,
};
