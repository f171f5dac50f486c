//! The homogeneous system `SᵢX + XSᵢᵀ = 0` over symmetric `X`.
//!
//! `X` is coordinatized isometrically: diagonal entries as they are, each
//! off-diagonal pair `(p, q)` by `√2·X_pq`. With the same scaling on the
//! output side, the stacked operator is an isometry-respecting matrix
//! representation of `X ↦ (SᵢX + XSᵢᵀ)ᵢ`, so orthonormal null vectors map to
//! Frobenius-orthonormal symmetric matrices.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use nalgebra::SVD;

use crate::decompose::CoefficientSet;
use crate::error::{Error, Result};
use crate::linalg::{symmetrize, Matrix};

/// Coordinates `(p, q)`, `p ≤ q`, of an `m × m` symmetric matrix in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricBasisIndex {
    size: usize,
    pairs: Vec<(usize, usize)>,
}

impl SymmetricBasisIndex {
    pub fn new(size: usize) -> Self {
        let pairs = (0..size)
            .flat_map(|p| (p..size).map(move |q| (p, q)))
            .collect();
        Self { size, pairs }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// `m(m+1)/2`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Isometric coordinates of the upper triangle of `x`.
    pub fn coordinates(&self, x: &Matrix) -> Vec<f64> {
        self.pairs
            .iter()
            .map(|&(p, q)| {
                if p == q {
                    x[(p, p)]
                } else {
                    SQRT_2 * x[(p, q)]
                }
            })
            .collect()
    }

    /// Symmetric matrix with the given isometric coordinates.
    pub fn matrix(&self, coords: &[f64]) -> Matrix {
        let mut x = Matrix::zeros(self.size, self.size);
        for (&(p, q), &c) in self.pairs.iter().zip(coords) {
            if p == q {
                x[(p, p)] = c;
            } else {
                x[(p, q)] = c / SQRT_2;
                x[(q, p)] = c / SQRT_2;
            }
        }
        x
    }

    /// The symmetric matrix of coordinate `k` (unit Frobenius norm).
    pub fn unit(&self, k: usize) -> Matrix {
        let mut coords = alloc::vec![0.0; self.len()];
        coords[k] = 1.0;
        self.matrix(&coords)
    }
}

/// Orthonormal basis of the numerical solution space of the system.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSpaceBasis {
    pub basis: Vec<Matrix>,
    /// Largest `‖SᵢB + BSᵢᵀ‖_F` over basis elements `B` and inputs `Sᵢ`.
    pub residual: f64,
    /// Singular values of the stacked operator, decreasing.
    pub singular_values: Vec<f64>,
}

impl NullSpaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Stacked operator: one block of `m(m+1)/2` rows per matrix, columns indexed
/// by [`SymmetricBasisIndex`].
pub fn sylvester_operator(matrices: &[&Matrix], index: &SymmetricBasisIndex) -> Matrix {
    let n = index.len();
    let mut op = Matrix::zeros(matrices.len() * n, n);
    for col in 0..n {
        let e = index.unit(col);
        for (blk, s) in matrices.iter().enumerate() {
            let image = apply(s, &e);
            for (row, v) in index.coordinates(&image).into_iter().enumerate() {
                op[(blk * n + row, col)] = v;
            }
        }
    }
    op
}

/// `SX + XSᵀ`.
pub fn apply(s: &Matrix, x: &Matrix) -> Matrix {
    let sx = s * x;
    let t = sx.transpose();
    sx + t
}

/// Solutions of `SᵢX + XSᵢᵀ = 0` with singular values below `tol · σ_max`
/// treated as zero. Zero members of `set` are ignored.
pub fn sylvester_null_space(set: &CoefficientSet, tol: f64) -> Result<NullSpaceBasis> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let matrices: Vec<&Matrix> = set.nonzero().collect();
    if matrices.is_empty() {
        return Err(Error::AllZero);
    }
    let index = SymmetricBasisIndex::new(set.size());
    let op = sylvester_operator(&matrices, &index);
    // rows >= columns here, so V is complete
    let svd = SVD::new(op, false, true);
    let v_t = svd.v_t.expect("requested V");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = tol * sigma_max;

    let mut basis = Vec::new();
    for (k, &s) in sigma.iter().enumerate() {
        if s < cutoff {
            let coords: Vec<f64> = v_t.row(k).iter().copied().collect();
            basis.push(symmetrize(&index.matrix(&coords)));
        }
    }
    let residual = basis
        .iter()
        .flat_map(|b| matrices.iter().map(move |s| apply(s, b).norm()))
        .fold(0.0, f64::max);
    let mut singular_values: Vec<f64> = sigma.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    Ok(NullSpaceBasis {
        basis,
        residual,
        singular_values,
    })
}

/// The `count` right singular directions of the stacked operator with the
/// smallest singular values, whether or not they fall below a cutoff.
pub fn smallest_singular_subspace(set: &CoefficientSet, count: usize) -> Result<Vec<Matrix>> {
    let matrices: Vec<&Matrix> = set.nonzero().collect();
    if matrices.is_empty() {
        return Err(Error::AllZero);
    }
    let index = SymmetricBasisIndex::new(set.size());
    let svd = SVD::new(sylvester_operator(&matrices, &index), false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    Ok(order
        .into_iter()
        .take(count)
        .map(|k| {
            let coords: Vec<f64> = v_t.row(k).iter().copied().collect();
            symmetrize(&index.matrix(&coords))
        })
        .collect())
}
