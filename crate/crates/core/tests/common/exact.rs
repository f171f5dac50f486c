//! Exact rational Gaussian elimination, independent of the floating-point
//! path.

// elimination reads best with explicit indices
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

pub type IntMatrix = Vec<Vec<i64>>;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        for c in col..cols {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..cols {
                    let delta = &f * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the matrices flattened to rows of length `m²`.
pub fn set_rank(mats: &[IntMatrix]) -> usize {
    let rows = mats
        .iter()
        .map(|s| s.iter().flatten().map(|&v| q(v)).collect())
        .collect();
    rank(rows)
}

/// Dimension of `{X = Xᵀ : SX + XSᵀ = 0 for all S}`, unknowns `X_pq`, `p ≤ q`,
/// one equation per upper-triangle entry of each `SX + XSᵀ`.
pub fn sylvester_null_dim(mats: &[IntMatrix], m: usize) -> usize {
    let unknowns: Vec<(usize, usize)> = (0..m).flat_map(|p| (p..m).map(move |q| (p, q))).collect();
    let col_of = |a: usize, b: usize| {
        let (p, q) = if a <= b { (a, b) } else { (b, a) };
        unknowns.iter().position(|&u| u == (p, q)).unwrap()
    };
    let mut rows = Vec::new();
    for s in mats {
        for i in 0..m {
            for j in i..m {
                // sum_k S_ik X_kj + X_ik S_jk
                let mut row = vec![BigRational::zero(); unknowns.len()];
                for k in 0..m {
                    row[col_of(k, j)] += q(s[i][k]);
                    row[col_of(i, k)] += q(s[j][k]);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return unknowns.len();
    }
    unknowns.len() - rank(rows)
}

fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let m = a.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Unimodular `P` with integer inverse, built from elementary row operations.
pub fn unimodular<R: Rng>(rng: &mut R, m: usize) -> (IntMatrix, IntMatrix) {
    let mut p: IntMatrix = (0..m)
        .map(|i| (0..m).map(|j| (i == j) as i64).collect())
        .collect();
    let mut p_inv = p.clone();
    for _ in 0..2 * m {
        let i = rng.random_range(0..m);
        let j = rng.random_range(0..m);
        if i == j {
            continue;
        }
        let c = rng.random_range(-1..=1);
        // P <- E P with E = I + c e_i e_j^T, inverse I - c e_i e_j^T
        let mut e: IntMatrix = (0..m)
            .map(|r| (0..m).map(|s| (r == s) as i64).collect())
            .collect();
        let mut e_inv = e.clone();
        e[i][j] = c;
        e_inv[i][j] = -c;
        p = mul(&e, &p);
        p_inv = mul(&p_inv, &e_inv);
    }
    (p, p_inv)
}

/// A small integer instance: a mix of random matrices and `P T P⁻¹` with
/// integer skew `T`, so that solution spaces of every dimension occur.
pub fn integer_instance<R: Rng>(rng: &mut R, m: usize) -> Vec<IntMatrix> {
    let k = rng.random_range(1..=m * (m - 1) / 2 + 1);
    let (p, p_inv) = unimodular(rng, m);
    let conjugated = rng.random_bool(0.7);
    (0..k)
        .map(|_| {
            if conjugated && rng.random_bool(0.85) {
                let mut t = vec![vec![0i64; m]; m];
                for i in 0..m {
                    for j in i + 1..m {
                        let v = rng.random_range(-2..=2);
                        t[i][j] = v;
                        t[j][i] = -v;
                    }
                }
                mul(&mul(&p, &t), &p_inv)
            } else {
                (0..m)
                    .map(|_| (0..m).map(|_| rng.random_range(-2..=2)).collect())
                    .collect()
            }
        })
        .collect()
}

pub fn to_matrix(a: &IntMatrix) -> skewable_core::Matrix {
    let m = a.len();
    skewable_core::Matrix::from_fn(m, m, |r, c| a[r][c] as f64)
}
