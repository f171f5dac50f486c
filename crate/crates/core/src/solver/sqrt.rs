use crate::error::{Error, Result};
use crate::linalg::{sorted_symmetric_eigen, symmetrize, symmetry_defect, Matrix};

/// Symmetry tolerance on inputs, relative to `max(1, ‖A‖_F)`.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// The symmetric positive-definite square root `V·diag(√λ)·Vᵀ`.
pub fn symmetric_sqrt(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    let defect = symmetry_defect(a);
    if !(defect <= SYMMETRY_TOL * a.norm().max(1.0)) {
        return Err(Error::NotSymmetric { defect });
    }
    let (values, vectors) = sorted_symmetric_eigen(a);
    match values.first() {
        Some(&min) if !(min > 0.0) => {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min,
            })
        }
        _ => {}
    }
    let mut scaled = vectors.clone();
    for (mut col, &lambda) in scaled.column_iter_mut().zip(&values) {
        col *= libm::sqrt(lambda);
    }
    Ok(symmetrize(&(scaled * vectors.transpose())))
}
