//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

pub mod exact;

use rand::Rng;
use skewable_core::Matrix;

pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-ish random orthogonal matrix via QR with sign correction.
pub fn random_orthogonal<R: Rng>(rng: &mut R, m: usize) -> Matrix {
    let qr = gaussian_matrix(rng, m, m).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    q
}

/// `Q₁ diag(σ) Q₂` with `σ` log-uniform in `[1, max_cond]`, the extremes
/// pinned so the condition number is exactly `max_cond` when `pin` is set.
pub fn random_conditioned<R: Rng>(rng: &mut R, m: usize, max_cond: f64, pin: bool) -> Matrix {
    let log_max = max_cond.ln();
    let mut sigma: Vec<f64> = (0..m)
        .map(|_| (rng.random::<f64>() * log_max).exp())
        .collect();
    if pin && m >= 2 {
        sigma[0] = 1.0;
        sigma[1] = max_cond;
    }
    let q1 = random_orthogonal(rng, m);
    let q2 = random_orthogonal(rng, m);
    q1 * Matrix::from_diagonal(&skewable_core::nalgebra::DVector::from_vec(sigma)) * q2
}

pub fn random_skew<R: Rng>(rng: &mut R, m: usize) -> Matrix {
    let g = gaussian_matrix(rng, m, m);
    &g - g.transpose()
}

/// `S_k = P T_k P⁻¹` for random skew `T_k`.
pub fn skewable_instance<R: Rng>(
    rng: &mut R,
    m: usize,
    k: usize,
    max_cond: f64,
) -> (Matrix, Vec<Matrix>) {
    let pin = rng.random_bool(0.5);
    let p = random_conditioned(rng, m, max_cond, pin);
    let p_inv = p.clone().try_inverse().expect("well conditioned");
    let mats = (0..k).map(|_| &p * random_skew(rng, m) * &p_inv).collect();
    (p, mats)
}

/// How an obstructed instance breaks skewability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defect {
    /// One member gets trace at least 0.1.
    Trace,
    /// One traceless member gets a real eigenvalue pair `±r`, `r ≥ 0.1`.
    Spectrum,
}

/// A skewable instance with one member replaced by a similar copy of a
/// matrix that no conjugation can make skew.
pub fn obstructed_instance<R: Rng>(
    rng: &mut R,
    m: usize,
    k: usize,
    max_cond: f64,
    defect: Defect,
) -> Vec<Matrix> {
    let (p, mut mats) = skewable_instance(rng, m, k, max_cond);
    let p_inv = p.clone().try_inverse().expect("well conditioned");
    let r = 0.1 + rng.random::<f64>();
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let core = match defect {
        Defect::Trace => random_skew(rng, m) + Matrix::identity(m, m) * (sign * r / m as f64),
        Defect::Spectrum => {
            let mut d = Matrix::zeros(m, m);
            d[(0, 0)] = r;
            d[(1, 1)] = -r;
            if m > 2 {
                let rest = random_skew(rng, m - 2);
                d.view_mut((2, 2), (m - 2, m - 2)).copy_from(&rest);
            }
            let q = random_orthogonal(rng, m);
            &q * d * q.transpose()
        }
    };
    let slot = rng.random_range(0..k);
    mats[slot] = &p * core * &p_inv;
    mats
}
