//! Search for a positive-definite element of the solution space.

use alloc::vec::Vec;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{min_eigenvalue, sorted_symmetric_eigen, spectral_radius_symmetric, Matrix};

use super::sylvester::NullSpaceBasis;

/// Iterations of projected subgradient ascent per restart.
pub const ASCENT_ITERATIONS: usize = 500;

/// Tuning for [`find_positive_definite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefiniteSearch {
    /// Acceptance margin on `λ_min / ‖A‖₂`.
    pub eps_pd: f64,
    pub restarts: usize,
    pub seed: u64,
}

/// Result of the search.
#[derive(Debug, Clone, PartialEq)]
pub enum DefiniteOutcome {
    /// Positive-definite element, scaled to trace `m`.
    Found(Matrix),
    /// The solution space is provably free of positive-definite elements.
    Infeasible,
    /// The search over a space of dimension ≥ 2 failed; nothing is proved.
    NotFound { best_ratio: f64 },
}

impl DefiniteOutcome {
    pub fn matrix(&self) -> Option<&Matrix> {
        match self {
            DefiniteOutcome::Found(a) => Some(a),
            _ => None,
        }
    }
}

/// `λ_min(A) / max|λ(A)|`, the scale-free definiteness margin.
pub fn definiteness_ratio(a: &Matrix) -> f64 {
    let radius = spectral_radius_symmetric(a);
    if radius == 0.0 {
        return f64::NEG_INFINITY;
    }
    min_eigenvalue(a) / radius
}

/// Finds `A = Σ cⱼBⱼ` with `λ_min(A) > eps_pd · ‖A‖₂`.
///
/// A one-dimensional space is decided exactly from `±B`. Larger spaces are
/// searched by maximizing the concave function `c ↦ λ_min(Σ cⱼBⱼ)` over the
/// unit ball with projected subgradient ascent (step `1/k`) from `restarts`
/// seeded random starts. If the ascent stalls short of the margin, which
/// happens when the feasible cone is very thin, a barrier Newton phase
/// started from the best ascent iterate finishes the job.
pub fn find_positive_definite(space: &NullSpaceBasis, search: &DefiniteSearch) -> DefiniteOutcome {
    let basis = &space.basis;
    match basis.len() {
        0 => DefiniteOutcome::Infeasible,
        1 => {
            let b = &basis[0];
            let oriented = if b.trace() < 0.0 { -b } else { b.clone() };
            if definiteness_ratio(&oriented) > search.eps_pd {
                DefiniteOutcome::Found(normalize_trace(oriented))
            } else {
                DefiniteOutcome::Infeasible
            }
        }
        _ => {
            let (ratio, c) = ascend(basis, search);
            if ratio > search.eps_pd {
                return DefiniteOutcome::Found(normalize_trace(combine(basis, &c)));
            }
            match barrier_phase_one(basis, &c, search.eps_pd) {
                Ok(a) => DefiniteOutcome::Found(normalize_trace(a)),
                Err(refined) => DefiniteOutcome::NotFound {
                    best_ratio: ratio.max(refined),
                },
            }
        }
    }
}

fn ascend(basis: &[Matrix], search: &DefiniteSearch) -> (f64, Vec<f64>) {
    let d = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut best = (f64::NEG_INFINITY, alloc::vec![0.0; d]);
    for _ in 0..search.restarts.max(1) {
        let mut c: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        project_to_ball(&mut c);
        for k in 1..=ASCENT_ITERATIONS {
            let a = combine(basis, &c);
            let (values, vectors) = sorted_symmetric_eigen(&a);
            let radius = values[0].abs().max(values[values.len() - 1].abs());
            if radius > 0.0 && values[0] / radius > best.0 {
                best = (values[0] / radius, c.clone());
            }
            let v = vectors.column(0);
            let step = 1.0 / k as f64;
            for (cj, bj) in c.iter_mut().zip(basis) {
                *cj += step * (v.transpose() * bj * v)[(0, 0)];
            }
            project_to_ball(&mut c);
        }
    }
    best
}

/// Maximizes `t` subject to `Σ cⱼBⱼ − tI ≻ 0` and `tr(Σ cⱼBⱼ) = m` along the
/// central path of `s·t + log det(Σ cⱼBⱼ − tI)`, with damped Newton steps in
/// coordinates `c = c₀ + Z·y` of the trace hyperplane.
///
/// Returns the iterate with the best definiteness ratio when that exceeds
/// `eps_pd`, otherwise the ratio.
fn barrier_phase_one(basis: &[Matrix], start: &[f64], eps_pd: f64) -> Result<Matrix, f64> {
    let d = basis.len();
    let m = basis[0].nrows();
    let traces = DVector::from_iterator(d, basis.iter().map(Matrix::trace));
    let tau_sq = traces.norm_squared();
    if tau_sq == 0.0 {
        // every element is traceless, hence none is definite
        return Err(f64::NEG_INFINITY);
    }
    // orthonormal basis of the complement of `traces` in coefficient space
    let projector = Matrix::identity(d, d) - &traces * traces.transpose() / tau_sq;
    let (values, vectors) = sorted_symmetric_eigen(&projector);
    let z_cols: Vec<usize> = (0..d).filter(|&k| values[k] > 0.5).collect();
    let z = Matrix::from_fn(d, z_cols.len(), |r, c| vectors[(r, z_cols[c])]);

    let scale = m as f64;
    let mut c0 = DVector::from_column_slice(start);
    let along = traces.dot(&c0);
    c0 = if along > 0.0 {
        c0 * (scale / along)
    } else {
        &traces * (scale / tau_sq)
    };
    let a0 = combine(basis, c0.as_slice());
    let directions: Vec<Matrix> = (0..z.ncols())
        .map(|l| combine(basis, z.column(l).as_slice()))
        .collect();
    let p = directions.len();
    let identity = Matrix::identity(m, m);

    let build = |x: &DVector<f64>| -> Matrix {
        let mut a = a0.clone();
        for (l, dir) in directions.iter().enumerate() {
            a += dir * x[l];
        }
        a
    };
    // x = (y, t)
    let mut x = DVector::zeros(p + 1);
    x[p] = min_eigenvalue(&a0) - 1.0;
    let mut best: Option<(f64, Matrix)> = None;
    let mut weight = 1.0;
    for _ in 0..BARRIER_OUTER {
        for _ in 0..BARRIER_NEWTON {
            let a = build(&x);
            let ratio = definiteness_ratio(&a);
            if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
                best = Some((ratio, a.clone()));
            }
            let slack = &a - &identity * x[p];
            let Some(chol) = slack.cholesky() else {
                break;
            };
            let inv = chol.inverse();
            // G_l = C_l for y, G_t = -I
            let mut products: Vec<Matrix> = directions.iter().map(|dir| &inv * dir).collect();
            products.push(-&inv);
            let mut grad = DVector::zeros(p + 1);
            let mut hess = Matrix::zeros(p + 1, p + 1);
            for i in 0..=p {
                grad[i] = products[i].trace();
                for j in 0..=i {
                    let h = -(&products[i] * &products[j]).trace();
                    hess[(i, j)] = h;
                    hess[(j, i)] = h;
                }
            }
            grad[p] += weight;
            let Some(step) = (-&hess).cholesky().map(|ch| ch.solve(&grad)) else {
                break;
            };
            let decrement = grad.dot(&step);
            if decrement < 1e-10 {
                break;
            }
            let objective = |x: &DVector<f64>| -> Option<f64> {
                let slack = build(x) - &identity * x[p];
                let chol = slack.cholesky()?;
                let log_det: f64 = chol
                    .l_dirty()
                    .diagonal()
                    .iter()
                    .map(|v| 2.0 * libm::log(*v))
                    .sum();
                Some(weight * x[p] + log_det)
            };
            let current = objective(&x).unwrap_or(f64::NEG_INFINITY);
            let mut alpha = 1.0;
            while alpha >= 1e-12 {
                let trial = &x + &step * alpha;
                if objective(&trial).is_some_and(|v| v >= current + 0.25 * alpha * decrement) {
                    x = trial;
                    break;
                }
                alpha *= 0.5;
            }
            if alpha < 1e-12 {
                break;
            }
        }
        // the central point is within m/weight of the optimal margin
        if x[p] > 0.0 && m as f64 / weight < 1e-2 * x[p] {
            break;
        }
        weight *= 10.0;
    }
    match best {
        Some((ratio, a)) if ratio > eps_pd => Ok(a),
        Some((ratio, _)) => Err(ratio),
        None => Err(f64::NEG_INFINITY),
    }
}

const BARRIER_OUTER: usize = 16;
const BARRIER_NEWTON: usize = 50;

fn combine(basis: &[Matrix], c: &[f64]) -> Matrix {
    let m = basis[0].nrows();
    basis
        .iter()
        .zip(c)
        .fold(Matrix::zeros(m, m), |acc, (b, &cj)| acc + b * cj)
}

fn project_to_ball(c: &mut [f64]) {
    let norm = libm::sqrt(c.iter().map(|v| v * v).sum::<f64>());
    if norm > 1.0 {
        c.iter_mut().for_each(|v| *v /= norm);
    }
}

fn normalize_trace(a: Matrix) -> Matrix {
    let m = a.nrows() as f64;
    let t = a.trace();
    a * (m / t)
}
