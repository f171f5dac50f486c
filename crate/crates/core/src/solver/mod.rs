//! Simultaneous skew-symmetrization of a set of real matrices.
//!
//! `S₁,…,S_k` are simultaneously skewable iff the system `SᵢA + ASᵢᵀ = 0`
//! has a symmetric positive-definite solution `A`; its symmetric square root
//! `U` then makes every `U⁻¹SᵢU` skew-symmetric.
//!
//! [`skew_symmetrize`] runs the whole chain: cheap conjugation-invariant
//! rejections, the null space of the system, a search for a positive-definite
//! element, the square root, and an explicit residual check of the result.

mod definite;
mod sqrt;
mod sylvester;

use alloc::vec::Vec;

use nalgebra::Complex;

pub use definite::{
    definiteness_ratio, find_positive_definite, DefiniteOutcome, DefiniteSearch, ASCENT_ITERATIONS,
};
pub use sqrt::{symmetric_sqrt, SYMMETRY_TOL};
pub use sylvester::{
    apply as sylvester_apply, sylvester_null_space, sylvester_operator, NullSpaceBasis,
    SymmetricBasisIndex,
};

use crate::decompose::CoefficientSet;
use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, min_eigenvalue, skew_defect, symmetry_defect, Matrix};

/// Tolerances and search parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewOptions {
    /// Relative singular-value cutoff for the null space (and for rank).
    pub null_tol: f64,
    /// Acceptance margin on `λ_min(A) / ‖A‖₂`.
    pub eps_pd: f64,
    /// Bound on `‖X + Xᵀ‖_F / max(1, ‖X‖_F)` for each conjugate `X`.
    pub skew_tol: f64,
    /// Relative threshold for the trace and spectrum rejections.
    pub reject_tol: f64,
    pub restarts: usize,
    pub rng_seed: u64,
    /// Run the trace/spectrum rejections before solving.
    pub quick_reject: bool,
}

impl SkewOptions {
    pub fn validate(&self) -> Result<()> {
        for tol in [self.null_tol, self.eps_pd, self.skew_tol, self.reject_tol] {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::InvalidTolerance(tol));
            }
        }
        Ok(())
    }
}

impl Default for SkewOptions {
    fn default() -> Self {
        Self {
            null_tol: 1e-10,
            eps_pd: 1e-8,
            skew_tol: 1e-8,
            reject_tol: 1e-6,
            restarts: 20,
            rng_seed: 0,
            quick_reject: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SkewStatus {
    Skewable,
    NotSkewable,
    Indeterminate,
}

/// Why a set was not certified. Indices refer to positions in the input set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Obstruction {
    /// Conjugation preserves trace; skew matrices have trace zero.
    Trace { index: usize, trace: f64 },
    /// Skew matrices have purely imaginary spectrum.
    Spectrum { index: usize, real_part: f64 },
    /// The system has only the zero solution.
    NoSolution,
    /// One-dimensional solution space spanned by an indefinite or singular
    /// matrix.
    IndefiniteGenerator,
    /// Higher-dimensional solution space where the search found nothing.
    SearchFailed { best_ratio: f64 },
    /// A candidate was found but failed residual verification.
    Verification { worst_residual: f64 },
}

impl core::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            Self::Trace { index, trace } => write!(f, "matrix {index} has trace {trace:e}"),
            Self::Spectrum { index, real_part } => {
                write!(
                    f,
                    "matrix {index} has an eigenvalue with real part {real_part:e}"
                )
            }
            Self::NoSolution => write!(f, "the system has only the zero solution"),
            Self::IndefiniteGenerator => {
                write!(
                    f,
                    "the one-dimensional solution space contains no definite matrix"
                )
            }
            Self::SearchFailed { best_ratio } => write!(
                f,
                "no positive-definite solution found (best definiteness ratio {best_ratio:e})"
            ),
            Self::Verification { worst_residual } => {
                write!(
                    f,
                    "candidate failed verification (worst residual {worst_residual:e})"
                )
            }
        }
    }
}

impl Obstruction {
    /// Whether the obstruction proves non-skewability.
    pub fn is_proof(&self) -> bool {
        matches!(
            self,
            Obstruction::Trace { .. }
                | Obstruction::Spectrum { .. }
                | Obstruction::NoSolution
                | Obstruction::IndefiniteGenerator
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewCertificate {
    pub status: SkewStatus,
    /// Positive-definite solution with `tr A = m`.
    pub a: Option<Matrix>,
    /// Symmetric positive-definite `U` with `U·U = A`.
    pub u: Option<Matrix>,
    pub lambda_min_a: Option<f64>,
    /// `‖U⁻¹SᵢU + (U⁻¹SᵢU)ᵀ‖_F` per input matrix.
    pub skew_residuals: Vec<f64>,
    /// Dimension of the numerical solution space, when it was computed.
    pub null_space_dim: Option<usize>,
    pub obstruction: Option<Obstruction>,
}

impl SkewCertificate {
    fn rejected(
        status: SkewStatus,
        obstruction: Obstruction,
        null_space_dim: Option<usize>,
    ) -> Self {
        Self {
            status,
            a: None,
            u: None,
            lambda_min_a: None,
            skew_residuals: Vec::new(),
            null_space_dim,
            obstruction: Some(obstruction),
        }
    }

    pub fn is_skewable(&self) -> bool {
        self.status == SkewStatus::Skewable
    }

    /// `U⁻¹SᵢU` for each member of `set`, when `U` is present.
    pub fn conjugates(&self, set: &CoefficientSet) -> Option<Vec<Matrix>> {
        let u = self.u.as_ref()?;
        let u_inv = checked_inverse(u).ok()?;
        Some(set.matrices().iter().map(|s| &u_inv * s * u).collect())
    }
}

/// Whether `x` passes the skewness check at `tol`.
pub fn is_skew(x: &Matrix, tol: f64) -> bool {
    skew_defect(x) <= tol * x.norm().max(1.0)
}

/// First member whose trace or spectrum rules out skewability.
pub fn quick_reject(set: &CoefficientSet, tol: f64) -> Option<Obstruction> {
    for (index, s) in set.matrices().iter().enumerate() {
        let scale = s.norm();
        if scale == 0.0 {
            continue;
        }
        let trace = s.trace();
        if trace.abs() > tol * scale {
            return Some(Obstruction::Trace { index, trace });
        }
        let real_part = s
            .complex_eigenvalues()
            .iter()
            .map(|z: &Complex<f64>| z.re)
            .fold(
                0.0,
                |acc: f64, re| if re.abs() > acc.abs() { re } else { acc },
            );
        if real_part.abs() > tol * scale {
            return Some(Obstruction::Spectrum { index, real_part });
        }
    }
    None
}

/// Decides simultaneous skewability of `set` and, when it holds, returns the
/// skew-symmetrizing `U`. Only invalid tolerances are errors; every
/// mathematical outcome is encoded in the certificate status.
pub fn skew_symmetrize(set: &CoefficientSet, opts: &SkewOptions) -> Result<SkewCertificate> {
    opts.validate()?;
    let m = set.size();
    if set.nonzero().next().is_none() {
        return Ok(SkewCertificate {
            status: SkewStatus::Skewable,
            a: Some(Matrix::identity(m, m)),
            u: Some(Matrix::identity(m, m)),
            lambda_min_a: Some(1.0),
            skew_residuals: alloc::vec![0.0; set.len()],
            null_space_dim: Some(m * (m + 1) / 2),
            obstruction: None,
        });
    }
    if opts.quick_reject {
        if let Some(obstruction) = quick_reject(set, opts.reject_tol) {
            return Ok(SkewCertificate::rejected(
                SkewStatus::NotSkewable,
                obstruction,
                None,
            ));
        }
    }

    // the set has a nonzero member, so only a bad tolerance can fail here
    let space = sylvester_null_space(set, opts.null_tol)?;
    let d = space.dim();
    let search = DefiniteSearch {
        eps_pd: opts.eps_pd,
        restarts: opts.restarts,
        seed: opts.rng_seed,
    };
    let a = match find_positive_definite(&space, &search) {
        DefiniteOutcome::Found(a) => a,
        DefiniteOutcome::Infeasible => {
            let obstruction = if d == 0 {
                Obstruction::NoSolution
            } else {
                Obstruction::IndefiniteGenerator
            };
            return Ok(SkewCertificate::rejected(
                SkewStatus::NotSkewable,
                obstruction,
                Some(d),
            ));
        }
        DefiniteOutcome::NotFound { best_ratio } => {
            return Ok(SkewCertificate::rejected(
                SkewStatus::Indeterminate,
                Obstruction::SearchFailed { best_ratio },
                Some(d),
            ))
        }
    };

    let Some(mut best) = Candidate::evaluate(set, a) else {
        return Ok(SkewCertificate::rejected(
            SkewStatus::Indeterminate,
            Obstruction::Verification {
                worst_residual: f64::INFINITY,
            },
            Some(d),
        ));
    };
    // iterative refinement: re-solve in the frame of the current U, where the
    // system is well conditioned, and map the correction back
    for _ in 0..REFINEMENT_PASSES {
        if best.worst <= opts.skew_tol * 1e-3 {
            break;
        }
        match refine(set, &best, d.max(1), opts.eps_pd).and_then(|a| Candidate::evaluate(set, a)) {
            Some(c) if c.worst < best.worst => best = c,
            _ => break,
        }
    }

    let lambda_min_a = min_eigenvalue(&best.a);
    if !(best.worst <= opts.skew_tol) {
        return Ok(SkewCertificate {
            status: SkewStatus::Indeterminate,
            a: None,
            u: None,
            lambda_min_a: Some(lambda_min_a),
            skew_residuals: best.residuals,
            null_space_dim: Some(d),
            obstruction: Some(Obstruction::Verification {
                worst_residual: best.worst,
            }),
        });
    }
    Ok(SkewCertificate {
        status: SkewStatus::Skewable,
        a: Some(best.a),
        u: Some(best.u),
        lambda_min_a: Some(lambda_min_a),
        skew_residuals: best.residuals,
        null_space_dim: Some(d),
        obstruction: None,
    })
}

/// Upper bound on refinement passes after the first solve.
pub const REFINEMENT_PASSES: usize = 3;

struct Candidate {
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    residuals: Vec<f64>,
    /// Largest `‖X + Xᵀ‖_F / max(1, ‖X‖_F)` over the conjugates.
    worst: f64,
}

impl Candidate {
    fn evaluate(set: &CoefficientSet, a: Matrix) -> Option<Self> {
        let u = symmetric_sqrt(&a).ok()?;
        let u_inv = checked_inverse(&u).ok()?;
        let mut residuals = Vec::with_capacity(set.len());
        let mut worst = 0.0f64;
        for s in set.matrices() {
            let x = &u_inv * s * &u;
            let r = skew_defect(&x);
            worst = worst.max(r / x.norm().max(1.0));
            residuals.push(r);
        }
        Some(Self {
            a,
            u,
            u_inv,
            residuals,
            worst,
        })
    }
}

/// `A' ≈ I` solving the system for `U⁻¹SᵢU`, pulled back to `U A' U`.
fn refine(set: &CoefficientSet, current: &Candidate, dim: usize, eps_pd: f64) -> Option<Matrix> {
    let m = set.size();
    let frame: Vec<Matrix> = set
        .matrices()
        .iter()
        .map(|s| &current.u_inv * s * &current.u)
        .collect();
    let frame = CoefficientSet::new(m, set.labels().to_vec(), frame).ok()?;
    let directions = sylvester::smallest_singular_subspace(&frame, dim).ok()?;
    let identity = Matrix::identity(m, m);
    let local = directions
        .iter()
        .fold(Matrix::zeros(m, m), |acc, b| acc + b * b.dot(&identity));
    if !(definiteness_ratio(&local) > eps_pd) {
        return None;
    }
    let a = crate::linalg::symmetrize(&(&current.u * local * &current.u));
    let t = a.trace();
    Some(a * (m as f64 / t))
}

/// Tolerance on `‖U·U − A‖_F / ‖A‖_F`.
pub const SQUARE_ROOT_TOL: f64 = 1e-10;

/// One failed check found by [`verify_skewing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VerificationFailure {
    Shape,
    ASymmetry {
        defect: f64,
    },
    ANotDefinite {
        min_eigenvalue: f64,
    },
    USymmetry {
        defect: f64,
    },
    UNotDefinite {
        min_eigenvalue: f64,
    },
    SquareRoot {
        relative_error: f64,
    },
    USingular,
    /// `SᵢA + ASᵢᵀ` too large, relative to `‖Sᵢ‖_F ‖A‖_F`.
    System {
        index: usize,
        relative_residual: f64,
    },
    Skewness {
        index: usize,
        residual: f64,
    },
}

impl core::fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            Self::Shape => write!(f, "A or U has the wrong shape"),
            Self::ASymmetry { defect } => write!(f, "A is not symmetric (defect {defect:e})"),
            Self::ANotDefinite { min_eigenvalue } => {
                write!(f, "A is not positive definite (min eigenvalue {min_eigenvalue:e})")
            }
            Self::USymmetry { defect } => write!(f, "U is not symmetric (defect {defect:e})"),
            Self::UNotDefinite { min_eigenvalue } => {
                write!(f, "U is not positive definite (min eigenvalue {min_eigenvalue:e})")
            }
            Self::SquareRoot { relative_error } => {
                write!(f, "U·U differs from A (relative error {relative_error:e})")
            }
            Self::USingular => write!(f, "U is singular"),
            Self::System { index, relative_residual } => write!(
                f,
                "A does not solve the system for matrix {index} (relative residual {relative_residual:e})"
            ),
            Self::Skewness { index, residual } => {
                write!(f, "conjugate of matrix {index} is not skew (residual {residual:e})")
            }
        }
    }
}

/// Independent check of a claimed pair `(A, U)` against the input set: both
/// symmetric positive definite, `U·U = A`, `A` solves the system and every
/// `U⁻¹SᵢU` is skew-symmetric.
pub fn verify_skewing(
    set: &CoefficientSet,
    a: &Matrix,
    u: &Matrix,
    skew_tol: f64,
) -> Vec<VerificationFailure> {
    let m = set.size();
    let mut failures = Vec::new();
    if a.shape() != (m, m) || u.shape() != (m, m) {
        failures.push(VerificationFailure::Shape);
        return failures;
    }
    let a_norm = a.norm().max(f64::MIN_POSITIVE);
    let defect = symmetry_defect(a);
    if defect > SYMMETRY_TOL * a_norm.max(1.0) {
        failures.push(VerificationFailure::ASymmetry { defect });
    }
    let lmin = min_eigenvalue(a);
    if !(lmin > 0.0) {
        failures.push(VerificationFailure::ANotDefinite {
            min_eigenvalue: lmin,
        });
    }
    let defect = symmetry_defect(u);
    if defect > SYMMETRY_TOL * u.norm().max(1.0) {
        failures.push(VerificationFailure::USymmetry { defect });
    }
    let lmin = min_eigenvalue(u);
    if !(lmin > 0.0) {
        failures.push(VerificationFailure::UNotDefinite {
            min_eigenvalue: lmin,
        });
    }
    let relative_error = (u * u - a).norm() / a_norm;
    if !(relative_error <= SQUARE_ROOT_TOL) {
        failures.push(VerificationFailure::SquareRoot { relative_error });
    }
    for (index, s) in set.matrices().iter().enumerate() {
        let scale = s.norm() * a_norm;
        if scale == 0.0 {
            continue;
        }
        let relative_residual = sylvester_apply(s, a).norm() / scale;
        if !(relative_residual <= skew_tol) {
            failures.push(VerificationFailure::System {
                index,
                relative_residual,
            });
        }
    }
    match checked_inverse(u) {
        Ok(u_inv) => {
            for (index, s) in set.matrices().iter().enumerate() {
                let x = &u_inv * s * u;
                if !is_skew(&x, skew_tol) {
                    failures.push(VerificationFailure::Skewness {
                        index,
                        residual: skew_defect(&x),
                    });
                }
            }
        }
        Err(_) => failures.push(VerificationFailure::USingular),
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::decompose;
    use crate::golden;

    fn set2(rows: &[f64]) -> CoefficientSet {
        CoefficientSet::from_matrices(2, alloc::vec![Matrix::from_row_slice(2, 2, rows)]).unwrap()
    }

    #[test]
    fn worked_example_is_skewable() {
        let set = decompose(&golden::omega());
        let cert = skew_symmetrize(&set, &SkewOptions::default()).unwrap();
        assert_eq!(cert.status, SkewStatus::Skewable);
        assert_eq!(cert.null_space_dim, Some(1));
        let a = cert.a.as_ref().unwrap();
        assert!((a - golden::a() * 0.5).amax() < 1e-12);
        assert!(cert.skew_residuals.iter().all(|&r| r <= 1e-8));
        let conj = cert.conjugates(&set).unwrap();
        // internal slots: e1^e2 = S1, e1^e3 = -S3, e2^e3 = S2
        for (got, want) in conj.iter().zip([
            golden::conjugate_s1(),
            -golden::conjugate_s3(),
            golden::conjugate_s2(),
        ]) {
            assert!((got - want).amax() <= 5e-5, "{got}");
        }
        assert!(verify_skewing(&set, a, cert.u.as_ref().unwrap(), 1e-8).is_empty());
    }

    #[test]
    fn trace_obstruction() {
        let cert = skew_symmetrize(&set2(&[1.0, 0.0, 0.0, 0.0]), &SkewOptions::default()).unwrap();
        assert_eq!(cert.status, SkewStatus::NotSkewable);
        assert!(matches!(
            cert.obstruction,
            Some(Obstruction::Trace { index: 0, .. })
        ));
        let opts = SkewOptions {
            quick_reject: false,
            ..SkewOptions::default()
        };
        let cert = skew_symmetrize(&set2(&[1.0, 0.0, 0.0, 0.0]), &opts).unwrap();
        assert_eq!(cert.status, SkewStatus::NotSkewable);
        assert_eq!(cert.obstruction, Some(Obstruction::IndefiniteGenerator));
        assert!(cert.a.is_none() && cert.u.is_none());
    }

    #[test]
    fn spectrum_obstruction() {
        // trace zero, eigenvalues ±1
        let cert = skew_symmetrize(&set2(&[0.0, 1.0, 1.0, 0.0]), &SkewOptions::default()).unwrap();
        assert_eq!(cert.status, SkewStatus::NotSkewable);
        assert!(matches!(
            cert.obstruction,
            Some(Obstruction::Spectrum { .. })
        ));
    }

    #[test]
    fn conjugated_rotation_generator() {
        // P T P^-1 with P = diag(2, 1)
        let set = set2(&[0.0, 2.0, -0.5, 0.0]);
        let s = &set.matrices()[0];
        let d = Matrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]);
        assert_eq!(s * &d + &d * s.transpose(), Matrix::zeros(2, 2));

        let cert = skew_symmetrize(&set, &SkewOptions::default()).unwrap();
        assert_eq!(cert.status, SkewStatus::Skewable);
        let a = cert.a.as_ref().unwrap();
        assert!((a - Matrix::from_row_slice(2, 2, &[1.6, 0.0, 0.0, 0.4])).amax() < 1e-12);
        let u = cert.u.as_ref().unwrap();
        let c = libm::sqrt(0.4);
        assert!((u - Matrix::from_row_slice(2, 2, &[2.0 * c, 0.0, 0.0, c])).amax() < 1e-12);
        let conj = &cert.conjugates(&set).unwrap()[0];
        assert!((conj - Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])).amax() < 1e-12);
    }

    #[test]
    fn all_zero_set_is_vacuously_skewable() {
        let set = CoefficientSet::from_matrices(3, alloc::vec![Matrix::zeros(3, 3)]).unwrap();
        let cert = skew_symmetrize(&set, &SkewOptions::default()).unwrap();
        assert_eq!(cert.status, SkewStatus::Skewable);
        assert_eq!(cert.u, Some(Matrix::identity(3, 3)));
    }

    #[test]
    fn nilpotent_block_is_indeterminate() {
        let mut s = Matrix::zeros(3, 3);
        s[(0, 1)] = 1.0;
        let set = CoefficientSet::from_matrices(3, alloc::vec![s]).unwrap();
        let cert = skew_symmetrize(&set, &SkewOptions::default()).unwrap();
        assert_eq!(cert.status, SkewStatus::Indeterminate);
        assert_eq!(cert.null_space_dim, Some(3));
        assert!(matches!(
            cert.obstruction,
            Some(Obstruction::SearchFailed { .. })
        ));
    }

    #[test]
    fn conjugates_do_not_depend_on_scale_of_a() {
        let set = decompose(&golden::omega());
        let u1 = symmetric_sqrt(&golden::a()).unwrap();
        let u2 = symmetric_sqrt(&(golden::a() * 17.0)).unwrap();
        let (i1, i2) = (checked_inverse(&u1).unwrap(), checked_inverse(&u2).unwrap());
        for s in set.matrices() {
            assert!((&i1 * s * &u1 - &i2 * s * &u2).amax() < 1e-12);
        }
    }

    #[test]
    fn verification_rejects_perturbed_root() {
        let set = decompose(&golden::omega());
        let cert = skew_symmetrize(&set, &SkewOptions::default()).unwrap();
        let a = cert.a.unwrap();
        let mut u = cert.u.unwrap();
        u[(0, 2)] += 1e-2;
        let failures = verify_skewing(&set, &a, &u, 1e-8);
        assert!(failures
            .iter()
            .any(|f| matches!(f, VerificationFailure::SquareRoot { .. })));
    }
}
