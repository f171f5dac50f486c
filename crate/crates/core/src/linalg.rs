//! Small dense helpers shared by the modules.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;

/// Relative cutoff below which a matrix is treated as singular.
pub const SINGULAR_RATIO: f64 = 1e-12;

pub fn frobenius(a: &Matrix) -> f64 {
    a.norm()
}

/// `‖X + Xᵀ‖_F`, zero exactly when `X` is skew-symmetric.
pub fn skew_defect(x: &Matrix) -> f64 {
    (x + x.transpose()).norm()
}

/// `‖X − Xᵀ‖_F`, zero exactly when `X` is symmetric.
pub fn symmetry_defect(x: &Matrix) -> f64 {
    (x - x.transpose()).norm()
}

pub fn symmetrize(x: &Matrix) -> Matrix {
    (x + x.transpose()) * 0.5
}

/// Singular values sorted in decreasing order.
pub fn singular_values(a: &Matrix) -> alloc::vec::Vec<f64> {
    if a.is_empty() {
        return alloc::vec::Vec::new();
    }
    let mut s: alloc::vec::Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// `σ_min / σ_max`, or 0 for the zero matrix.
pub fn inverse_condition(a: &Matrix) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if max > 0.0 => min / max,
        _ => 0.0,
    }
}

/// Inverse of a square matrix, rejecting anything with
/// `σ_min < 1e-12 · σ_max`.
pub fn checked_inverse(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    let ratio = inverse_condition(a);
    if !(ratio >= SINGULAR_RATIO) {
        return Err(Error::Singular { ratio });
    }
    a.clone().try_inverse().ok_or(Error::Singular { ratio })
}

/// `X ↦ U⁻¹XU` for a fixed well-conditioned `U`, evaluated as the solve
/// `U \ (XU)` rather than through an explicit inverse.
#[derive(Debug, Clone)]
pub struct Conjugator {
    u: Matrix,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl Conjugator {
    pub fn new(u: &Matrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimensionMismatch {
                expected: u.nrows(),
                found: u.ncols(),
            });
        }
        let ratio = inverse_condition(u);
        if !(ratio >= SINGULAR_RATIO) {
            return Err(Error::Singular { ratio });
        }
        Ok(Self {
            u: u.clone(),
            lu: u.clone().lu(),
        })
    }

    pub fn apply(&self, x: &Matrix) -> Matrix {
        self.lu
            .solve(&(x * &self.u))
            .expect("nonsingular by construction")
    }
}

/// Eigen-decomposition of the symmetric part of `a`, eigenvalues ascending.
pub fn sorted_symmetric_eigen(a: &Matrix) -> (alloc::vec::Vec<f64>, Matrix) {
    let eig = SymmetricEigen::new(symmetrize(a));
    let n = a.nrows();
    let mut order: alloc::vec::Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Smallest eigenvalue of the symmetric part of `a`.
pub fn min_eigenvalue(a: &Matrix) -> f64 {
    SymmetricEigen::new(symmetrize(a))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Largest eigenvalue magnitude of the symmetric part of `a`.
pub fn spectral_radius_symmetric(a: &Matrix) -> f64 {
    SymmetricEigen::new(symmetrize(a))
        .eigenvalues
        .iter()
        .fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

/// Frobenius inner product `tr(AᵀB)`.
pub fn frobenius_dot(a: &Matrix, b: &Matrix) -> f64 {
    a.dot(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_rejects_singular() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(checked_inverse(&a), Err(Error::Singular { .. })));
        let b = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-13]);
        assert!(matches!(checked_inverse(&b), Err(Error::Singular { .. })));
        let c = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-11]);
        assert!(checked_inverse(&c).is_ok());
    }

    #[test]
    fn sorted_eigen_ascending() {
        let a = Matrix::from_row_slice(3, 3, &[5.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0]);
        let (vals, vecs) = sorted_symmetric_eigen(&a);
        assert_eq!(vals, [-1.0, 2.0, 5.0]);
        assert!((vecs[(1, 0)].abs() - 1.0).abs() < 1e-14);
    }
}
