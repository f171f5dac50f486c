//! Measuring tools for how two skew-symmetrizers relate.
//!
//! For a full-rank set, two skew-symmetrizers `U`, `V` with equal determinant
//! differ by an orthogonal factor, `U = V·O`. The underlying fact is that a
//! unit-determinant `A` with `A⁻¹XA` skew for every skew `X` is orthogonal.
//! These functions only measure; establishing the hypotheses is up to the
//! caller.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, skew_defect, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalFactorReport {
    /// `O = V⁻¹U`.
    pub o: Matrix,
    /// `‖OᵀO − I‖_F`.
    pub orthogonality_defect: f64,
    /// `det U / det V`.
    pub det_ratio: f64,
    pub is_orthogonal: bool,
}

/// Computes `O = V⁻¹U` and how far it is from orthogonal.
pub fn orthogonal_factor(u: &Matrix, v: &Matrix, tol: f64) -> Result<OrthogonalFactorReport> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            expected: v.nrows(),
            found: u.nrows(),
        });
    }
    checked_inverse(u)?;
    let v_inv = checked_inverse(v)?;
    let o = v_inv * u;
    let m = o.nrows();
    let orthogonality_defect = (o.transpose() * &o - Matrix::identity(m, m)).norm();
    Ok(OrthogonalFactorReport {
        det_ratio: u.determinant() / v.determinant(),
        is_orthogonal: orthogonality_defect <= tol,
        orthogonality_defect,
        o,
    })
}

/// `E_pq − E_qp` for all `p < q`.
pub fn elementary_skew_basis(m: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for p in 0..m {
        for q in p + 1..m {
            let mut x = Matrix::zeros(m, m);
            x[(p, q)] = 1.0;
            x[(q, p)] = -1.0;
            out.push(x);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewPreservation {
    pub preserved: bool,
    /// Largest `‖X' + X'ᵀ‖_F / ‖X'‖_F` over the probes `X' = A⁻¹XA`.
    pub worst_defect: f64,
}

/// Whether conjugation `X ↦ A⁻¹XA` maps skew matrices to skew matrices,
/// probed on the elementary skew basis (enough by linearity).
pub fn preserves_skew_space(a: &Matrix, tol: f64) -> Result<SkewPreservation> {
    let a_inv = checked_inverse(a)?;
    let worst_defect = elementary_skew_basis(a.nrows())
        .iter()
        .map(|x| {
            let image = &a_inv * x * a;
            skew_defect(&image) / image.norm()
        })
        .fold(0.0, f64::max);
    Ok(SkewPreservation {
        preserved: worst_defect <= tol,
        worst_defect,
    })
}
