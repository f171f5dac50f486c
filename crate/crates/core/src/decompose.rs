//! Reduction of a matrix of 2-forms to the set of its real coefficient
//! matrices, and the rank of that set.
//!
//! `Ω = Σₖ wₖ Sₖ` over the wedge basis is skewable exactly when the `Sₖ` are
//! simultaneously skewable, because the `wₖ` are linearly independent.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exterior::{FormBasis, FormMatrix, Wedge};
use crate::linalg::{singular_values, Matrix};

/// Relative singular-value cutoff used for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Real `m × m` matrices labelled by distinct wedge basis elements.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    size: usize,
    labels: Vec<Wedge>,
    matrices: Vec<Matrix>,
}

impl CoefficientSet {
    pub fn new(size: usize, labels: Vec<Wedge>, matrices: Vec<Matrix>) -> Result<Self> {
        if labels.len() != matrices.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: matrices.len(),
            });
        }
        for (k, w) in labels.iter().enumerate() {
            if w.i >= w.j {
                return Err(Error::InvalidLabel { i: w.i, j: w.j });
            }
            if labels[..k].contains(w) {
                return Err(Error::DuplicateLabel { i: w.i, j: w.j });
            }
        }
        for s in &matrices {
            if s.nrows() != size || s.ncols() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: if s.nrows() != size {
                        s.nrows()
                    } else {
                        s.ncols()
                    },
                });
            }
        }
        Ok(Self {
            size,
            labels,
            matrices,
        })
    }

    /// Treats a bare list of matrices as coefficients over the first wedge
    /// basis elements of a large enough `∧²V`.
    pub fn from_matrices(size: usize, matrices: Vec<Matrix>) -> Result<Self> {
        let basis = FormBasis::with_capacity(matrices.len());
        let labels = basis.wedges().take(matrices.len()).collect();
        Self::new(size, labels, matrices)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> &[Wedge] {
        &self.labels
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Wedge, &Matrix)> {
        self.labels.iter().copied().zip(self.matrices.iter())
    }

    /// The members that are not identically zero.
    pub fn nonzero(&self) -> impl Iterator<Item = &Matrix> {
        self.matrices.iter().filter(|s| s.iter().any(|&v| v != 0.0))
    }

    /// Rebuilds `Ω` over a basis of dimension `n`; labels outside that basis
    /// are rejected.
    pub fn to_form_matrix(&self, basis: FormBasis) -> Result<FormMatrix> {
        FormMatrix::from_labeled_terms(
            basis,
            self.size,
            self.iter().map(|(w, s)| ((w.i, w.j), s.clone())),
        )
    }
}

/// Term matrices of `Ω` with their wedge labels, zero terms included.
pub fn decompose(form: &FormMatrix) -> CoefficientSet {
    CoefficientSet {
        size: form.size(),
        labels: form.basis().wedges().collect(),
        matrices: form.terms().to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    pub full_rank: bool,
    /// Absolute singular-value threshold, `tol · σ_max`.
    pub threshold_used: f64,
    pub matrix_size: usize,
    /// `m(m−1)/2`, the dimension of the skew-symmetric `m × m` matrices.
    pub skew_space_dim: usize,
}

/// Number of linearly independent members of `set`.
///
/// Full rank is measured against `m(m−1)/2` for the matrix size `m`.
pub fn rank(set: &CoefficientSet, tol: f64) -> Result<RankReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let m = set.size();
    let rows: Vec<&Matrix> = set.nonzero().collect();
    let skew_space_dim = m * m.saturating_sub(1) / 2;
    let (rank, threshold_used) = if rows.is_empty() || m == 0 {
        (0, 0.0)
    } else {
        let stacked = Matrix::from_fn(rows.len(), m * m, |r, c| rows[r][(c / m, c % m)]);
        let s = singular_values(&stacked);
        let threshold = tol * s[0];
        (s.iter().filter(|&&v| v >= threshold).count(), threshold)
    };
    Ok(RankReport {
        rank,
        full_rank: rank == skew_space_dim,
        threshold_used,
        matrix_size: m,
        skew_space_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden;

    #[test]
    fn decompose_worked_example_matches_cyclic_labels() {
        let set = decompose(&golden::omega());
        assert_eq!(set.len(), 3);
        let form = set.to_form_matrix(FormBasis::new(3).unwrap()).unwrap();
        assert_eq!(form.term(0, 1).unwrap(), golden::s1());
        assert_eq!(form.term(1, 2).unwrap(), golden::s2());
        assert_eq!(form.term(2, 0).unwrap(), golden::s3());
        // internal slot e1^e3 holds -S3
        assert_eq!(set.matrices()[1], -golden::s3());
    }

    #[test]
    fn decompose_zero_form_keeps_zero_slots() {
        let set = decompose(&FormMatrix::zero(FormBasis::new(3).unwrap(), 2));
        assert_eq!(set.len(), 3);
        assert!(set.matrices().iter().all(|s| s.iter().all(|&v| v == 0.0)));
        assert_eq!(set.nonzero().count(), 0);
    }

    #[test]
    fn decompose_single_term_roundtrip() {
        let t = Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let f = FormMatrix::new(FormBasis::new(2).unwrap(), 2, alloc::vec![t.clone()]).unwrap();
        let set = decompose(&f);
        assert_eq!(set.matrices(), [t]);
        assert_eq!(set.labels(), [Wedge { i: 0, j: 1 }]);
    }

    #[test]
    fn rank_worked_example_is_full() {
        let r = rank(&decompose(&golden::omega()), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(r.rank, 3);
        assert!(r.full_rank);
        assert_eq!(r.skew_space_dim, 3);
    }

    #[test]
    fn rank_of_scalar_multiples() {
        let s = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let set = CoefficientSet::from_matrices(2, alloc::vec![s.clone(), s * 2.0]).unwrap();
        assert_eq!(rank(&set, DEFAULT_RANK_TOL).unwrap().rank, 1);
    }

    #[test]
    fn rank_of_empty_set() {
        let set = CoefficientSet::from_matrices(3, Vec::new()).unwrap();
        let r = rank(&set, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(r.rank, 0);
        assert!(!r.full_rank);
    }

    #[test]
    fn rank_rejects_bad_tolerance() {
        let set = CoefficientSet::from_matrices(2, Vec::new()).unwrap();
        assert!(rank(&set, 0.0).is_err());
        assert!(rank(&set, f64::NAN).is_err());
    }

    #[test]
    fn set_rejects_duplicates_and_bad_sizes() {
        let w = Wedge { i: 0, j: 1 };
        let z = Matrix::zeros(2, 2);
        assert_eq!(
            CoefficientSet::new(2, alloc::vec![w, w], alloc::vec![z.clone(), z.clone()]),
            Err(Error::DuplicateLabel { i: 0, j: 1 })
        );
        assert!(CoefficientSet::new(3, alloc::vec![w], alloc::vec![z]).is_err());
    }
}
