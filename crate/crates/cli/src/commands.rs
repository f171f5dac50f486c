//! The six subcommands, as functions from parsed inputs to an exit status
//! and the text for standard output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use skewable_core::linalg::{checked_inverse, min_eigenvalue, spectral_radius_symmetric};
use skewable_core::solver::{quick_reject, verify_skewing, SkewStatus};
use skewable_core::{
    decompose, orthogonal_factor, preserves_skew_space, rank, run_pipeline, skew_symmetrize,
    sylvester_null_space, CoefficientSet, Matrix, Obstruction, SkewOptions, Verdict,
};
use thiserror::Error;

use crate::format::{
    self, wedge_label, CertificateFile, ConnectionFile, FileError, FormMatrixFile, ParsedForm, Rows,
};
use crate::number::{format_f64, to_canonical_json};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Affirmative = 0,
    Negative = 1,
    Indeterminate = 2,
    Usage = 64,
    DataError = 65,
    NoInput = 66,
    CantCreate = 73,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn of_status(status: SkewStatus) -> Self {
        match status {
            SkewStatus::Skewable => Self::Affirmative,
            SkewStatus::NotSkewable => Self::Negative,
            SkewStatus::Indeterminate => Self::Indeterminate,
        }
    }

    fn of_verdict(verdict: Verdict) -> Self {
        match verdict {
            Verdict::PassesCurvatureTest | Verdict::PassesConnectionTest => Self::Affirmative,
            Verdict::NotMetricObstruction => Self::Negative,
            Verdict::Indeterminate => Self::Indeterminate,
        }
    }

    fn of_bool(ok: bool) -> Self {
        if ok {
            Self::Affirmative
        } else {
            Self::Negative
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: FileError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] skewable_core::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            Self::Read { .. } => Exit::NoInput,
            Self::Write { .. } => Exit::CantCreate,
            Self::Parse { .. } | Self::Input(_) => Exit::DataError,
            Self::Core(skewable_core::Error::InvalidTolerance(_)) => Exit::Usage,
            Self::Core(_) => Exit::DataError,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputMode {
    #[default]
    Human,
    Structured,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit: Exit,
    pub stdout: String,
    /// Remarks for the error stream that do not change the outcome.
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(exit: Exit, stdout: String) -> Self {
        Self {
            exit,
            stdout,
            notes: Vec::new(),
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

fn parsed<T>(path: &Path, r: Result<T, FileError>) -> CliResult<T> {
    r.map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn load_form(path: &Path) -> CliResult<ParsedForm> {
    parsed(path, FormMatrixFile::parse(&read(path)?))
}

fn matrix_text(m: &Matrix, indent: &str) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        out.push_str(indent);
        out.push('[');
        for v in row.iter() {
            // avoid printing "-0.000000"
            let v = if v.abs() < 5e-7 { 0.0 } else { *v };
            let _ = write!(out, " {v:>10.6}");
        }
        out.push_str(" ]\n");
    }
    out
}

fn labels_of_set(set: &CoefficientSet) -> Vec<(usize, usize)> {
    set.labels().iter().map(|w| (w.i, w.j)).collect()
}

pub fn decompose_cmd(form: &Path, mode: OutputMode) -> CliResult<Outcome> {
    let p = load_form(form)?;
    let stdout = match mode {
        OutputMode::Structured => to_canonical_json(&FormMatrixFile::labeled(&p.form, &p.labels)),
        OutputMode::Human => {
            let mut out = format!(
                "{} x {} matrix of 2-forms over {} basis 1-forms\n",
                p.form.size(),
                p.form.size(),
                p.form.basis().dim()
            );
            for &(i, j) in &p.labels {
                let _ = write!(out, "\n{}:\n", wedge_label((i, j)));
                out.push_str(&matrix_text(&p.form.term(i, j)?, "  "));
            }
            out
        }
    };
    Ok(Outcome::new(Exit::Affirmative, stdout))
}

#[derive(Serialize)]
struct RankDocument {
    rank: usize,
    full_rank: bool,
    threshold_used: f64,
    matrix_size: usize,
    skew_space_dim: usize,
}

pub fn rank_cmd(form: &Path, tol: f64, mode: OutputMode) -> CliResult<Outcome> {
    let p = load_form(form)?;
    let r = rank(&decompose(&p.form), tol)?;
    let stdout = match mode {
        OutputMode::Structured => to_canonical_json(&RankDocument {
            rank: r.rank,
            full_rank: r.full_rank,
            threshold_used: r.threshold_used,
            matrix_size: r.matrix_size,
            skew_space_dim: r.skew_space_dim,
        }),
        OutputMode::Human => format!(
            "rank {} of {} ({})\nsingular-value threshold {:e}\n",
            r.rank,
            r.skew_space_dim,
            if r.full_rank {
                "full rank"
            } else {
                "not full rank"
            },
            r.threshold_used
        ),
    };
    Ok(Outcome::new(Exit::of_bool(r.full_rank), stdout))
}

fn certificate_text(file: &CertificateFile, cert: &skewable_core::SkewCertificate) -> String {
    let mut out = format!("status: {:?}\n", file.status);
    if let Some(d) = cert.null_space_dim {
        let _ = writeln!(out, "solution space dimension: {d}");
    }
    if let Some(o) = cert.obstruction {
        let _ = writeln!(out, "reason: {}", describe(&o, file));
    }
    if let (Some(a), Some(u)) = (&cert.a, &cert.u) {
        out.push_str("\nA (trace normalized to the matrix size):\n");
        out.push_str(&matrix_text(a, "  "));
        out.push_str("\nU = sqrt(A):\n");
        out.push_str(&matrix_text(u, "  "));
        let _ = writeln!(
            out,
            "\nlambda_min(A) = {:e}",
            cert.lambda_min_a.unwrap_or(f64::NAN)
        );
        let worst = cert.skew_residuals.iter().copied().fold(0.0, f64::max);
        let _ = writeln!(out, "largest skew residual = {worst:e}");
    }
    out
}

fn describe(o: &Obstruction, file: &CertificateFile) -> String {
    match (o, &file.obstruction) {
        (_, Some(format::ObstructionRecord::Trace { label, trace, .. })) => {
            format!("the {label} coefficient has trace {trace:e}")
        }
        (
            _,
            Some(format::ObstructionRecord::Spectrum {
                label, real_part, ..
            }),
        ) => {
            format!("the {label} coefficient has an eigenvalue with real part {real_part:e}")
        }
        _ => o.to_string(),
    }
}

pub fn skewable_cmd(
    form: &Path,
    opts: &SkewOptions,
    certificate: Option<&Path>,
    mode: OutputMode,
) -> CliResult<Outcome> {
    let p = load_form(form)?;
    let set = decompose(&p.form);
    let cert = skew_symmetrize(&set, opts)?;
    let file = CertificateFile::new(&cert, set.size(), opts, &labels_of_set(&set));
    let json = to_canonical_json(&file);
    if let Some(path) = certificate {
        fs::write(path, &json).map_err(|source| CliError::Write {
            path: path.to_owned(),
            source,
        })?;
    }
    let stdout = match mode {
        OutputMode::Structured => json,
        OutputMode::Human => certificate_text(&file, &cert),
    };
    Ok(Outcome::new(Exit::of_status(cert.status), stdout))
}

#[derive(Serialize)]
struct VerifyDocument {
    status: format::StatusName,
    valid: Option<bool>,
    failures: Vec<String>,
    skew_residuals: Vec<f64>,
    square_root_error: Option<f64>,
}

/// Re-derives the claim a certificate makes about `set`, without trusting
/// anything but the certificate's tolerances.
fn check_certificate(
    file: &CertificateFile,
    set: &CoefficientSet,
    skew_tol: f64,
) -> CliResult<VerifyDocument> {
    let cert = file
        .certificate()
        .map_err(|e| CliError::Input(format!("certificate: {e}")))?;
    let opts = file.options();
    let mut doc = VerifyDocument {
        status: file.status,
        valid: None,
        failures: Vec::new(),
        skew_residuals: Vec::new(),
        square_root_error: None,
    };
    if file.size != set.size() {
        doc.failures.push(format!(
            "certificate is for {0}x{0} matrices, input is {1}x{1}",
            file.size,
            set.size()
        ));
        doc.valid = Some(false);
        return Ok(doc);
    }
    match cert.status {
        SkewStatus::Indeterminate => return Ok(doc),
        SkewStatus::Skewable => {
            let (Some(a), Some(u)) = (&cert.a, &cert.u) else {
                doc.failures
                    .push("a Skewable certificate must carry A and U".into());
                doc.valid = Some(false);
                return Ok(doc);
            };
            if cert.skew_residuals.len() != set.len() {
                doc.failures.push(format!(
                    "certificate lists {} residuals for {} matrices",
                    cert.skew_residuals.len(),
                    set.len()
                ));
            }
            doc.failures.extend(
                verify_skewing(set, a, u, skew_tol)
                    .iter()
                    .map(ToString::to_string),
            );
            doc.square_root_error = Some((u * u - a).norm() / a.norm());
            if let Ok(u_inv) = checked_inverse(u) {
                doc.skew_residuals = set
                    .matrices()
                    .iter()
                    .map(|s| {
                        let x = &u_inv * s * u;
                        (&x + x.transpose()).norm()
                    })
                    .collect();
            }
        }
        SkewStatus::NotSkewable => {
            if let Some(reason) = refute_negative(&cert.obstruction, set, &opts)? {
                doc.failures.push(reason);
            }
        }
    }
    doc.valid = Some(doc.failures.is_empty());
    Ok(doc)
}

/// `None` when the recorded obstruction holds for `set`.
fn refute_negative(
    obstruction: &Option<Obstruction>,
    set: &CoefficientSet,
    opts: &SkewOptions,
) -> CliResult<Option<String>> {
    let Some(o) = obstruction else {
        return Ok(Some(
            "a NotSkewable certificate must name its obstruction".into(),
        ));
    };
    Ok(match *o {
        Obstruction::Trace { index, .. } | Obstruction::Spectrum { index, .. } => {
            match set.matrices().get(index) {
                None => Some(format!(
                    "obstruction refers to matrix {index}, which does not exist"
                )),
                Some(s) => {
                    let single = CoefficientSet::from_matrices(set.size(), vec![s.clone()])?;
                    match quick_reject(&single, opts.reject_tol) {
                        Some(_) => None,
                        None => Some(format!(
                            "matrix {index} passes the trace and spectrum tests"
                        )),
                    }
                }
            }
        }
        Obstruction::NoSolution => match sylvester_null_space(set, opts.null_tol) {
            Ok(ns) if ns.dim() == 0 => None,
            Ok(ns) => Some(format!(
                "the system has a {}-dimensional solution space",
                ns.dim()
            )),
            Err(e) => Some(e.to_string()),
        },
        Obstruction::IndefiniteGenerator => match sylvester_null_space(set, opts.null_tol) {
            Ok(ns) if ns.dim() == 1 => {
                let b = &ns.basis[0];
                let lo = min_eigenvalue(b);
                let hi = -min_eigenvalue(&(-b));
                let margin = opts.eps_pd * spectral_radius_symmetric(b);
                if lo > margin || -hi > margin {
                    Some("the solution space is spanned by a definite matrix".into())
                } else {
                    None
                }
            }
            Ok(ns) => Some(format!(
                "the system has a {}-dimensional solution space",
                ns.dim()
            )),
            Err(e) => Some(e.to_string()),
        },
        Obstruction::SearchFailed { .. } | Obstruction::Verification { .. } => {
            Some("this obstruction does not prove non-skewability".into())
        }
    })
}

pub fn verify_cmd(
    certificate: &Path,
    form: &Path,
    skew_tol: Option<f64>,
    mode: OutputMode,
) -> CliResult<Outcome> {
    let file = parsed(certificate, CertificateFile::parse(&read(certificate)?))?;
    let p = load_form(form)?;
    let set = decompose(&p.form);
    let skew_tol = skew_tol.unwrap_or(file.tolerances.skew_tol);
    let doc = check_certificate(&file, &set, skew_tol)?;
    let exit = match doc.valid {
        None => Exit::Indeterminate,
        Some(ok) => Exit::of_bool(ok),
    };
    let stdout = match mode {
        OutputMode::Structured => to_canonical_json(&doc),
        OutputMode::Human => {
            let mut out = format!("certificate status: {:?}\n", doc.status);
            match doc.valid {
                None => out.push_str("nothing to verify: the solver did not decide this input\n"),
                Some(true) => out.push_str("verified\n"),
                Some(false) => out.push_str("REJECTED\n"),
            }
            for f in &doc.failures {
                let _ = writeln!(out, "  - {f}");
            }
            if let Some(e) = doc.square_root_error {
                let _ = writeln!(out, "|UU - A| / |A| = {e:e}");
            }
            for (k, r) in doc.skew_residuals.iter().enumerate() {
                let label = set
                    .labels()
                    .get(k)
                    .map(|w| w.to_string())
                    .unwrap_or_default();
                let _ = writeln!(out, "skew residual {label}: {r:e}");
            }
            out
        }
    };
    Ok(Outcome::new(exit, stdout))
}

#[derive(Serialize)]
struct FactorDocument {
    #[serde(rename = "O")]
    o: Rows,
    orthogonality_defect: f64,
    det_ratio: f64,
    is_orthogonal: bool,
    tolerance: f64,
    det_equalized: bool,
    skew_preserving: bool,
}

pub fn factor_cmd(
    u: &Path,
    v: &Path,
    tol: f64,
    equalize_det: bool,
    mode: OutputMode,
) -> CliResult<Outcome> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(skewable_core::Error::InvalidTolerance(tol).into());
    }
    let mu = parsed(u, format::parse_matrix(&read(u)?))?;
    let mut mv = parsed(v, format::parse_matrix(&read(v)?))?;
    let mut notes = Vec::new();
    let mut equalized = false;
    if equalize_det {
        let (du, dv) = (mu.determinant(), mv.determinant());
        if du * dv > 0.0 && mu.nrows() == mv.nrows() {
            mv *= (du / dv).powf(1.0 / mv.nrows() as f64);
            equalized = true;
        } else {
            notes.push("determinants have opposite signs (or vanish); V left unscaled".into());
        }
    }
    let r = orthogonal_factor(&mu, &mv, tol)?;
    let preserving = preserves_skew_space(&r.o, tol)?.preserved;
    let doc = FactorDocument {
        o: format::rows_of(&r.o),
        orthogonality_defect: r.orthogonality_defect,
        det_ratio: r.det_ratio,
        is_orthogonal: r.is_orthogonal,
        tolerance: tol,
        det_equalized: equalized,
        skew_preserving: preserving,
    };
    let stdout = match mode {
        OutputMode::Structured => to_canonical_json(&doc),
        OutputMode::Human => {
            let mut out = String::from("O = V^-1 U:\n");
            out.push_str(&matrix_text(&r.o, "  "));
            let _ = writeln!(out, "\n|O^T O - I| = {:e}", r.orthogonality_defect);
            let _ = writeln!(out, "det U / det V = {}", format_f64(r.det_ratio));
            let _ = writeln!(
                out,
                "{} at tolerance {tol:e}",
                if r.is_orthogonal {
                    "orthogonal"
                } else {
                    "not orthogonal"
                }
            );
            let _ = writeln!(
                out,
                "conjugation by O {} skew-symmetric matrices",
                if preserving {
                    "preserves"
                } else {
                    "does not preserve"
                }
            );
            out
        }
    };
    let mut outcome = Outcome::new(Exit::of_bool(r.is_orthogonal), stdout);
    outcome.notes = notes;
    Ok(outcome)
}

#[derive(Serialize)]
struct PipelineDocument {
    verdict: String,
    rank: usize,
    full_rank: bool,
    frame_unique_up_to_orthogonal: bool,
    #[serde(rename = "B")]
    b: Option<Rows>,
    connection_skew: Option<bool>,
    transformed_curvature: Option<FormMatrixFile>,
    transformed_connection: Option<ConnectionFile>,
    certificate: CertificateFile,
}

pub fn pipeline_cmd(
    form: &Path,
    connection: Option<&Path>,
    opts: &SkewOptions,
    mode: OutputMode,
) -> CliResult<Outcome> {
    let p = load_form(form)?;
    let conn = match connection {
        Some(path) => Some(parsed(path, ConnectionFile::parse(&read(path)?))?),
        None => None,
    };
    let report = run_pipeline(&p.form, conn.as_ref(), opts)?;
    let set = decompose(&p.form);
    let cert_file =
        CertificateFile::new(&report.certificate, set.size(), opts, &labels_of_set(&set));
    let mut notes = Vec::new();
    if !report.frame_unique_up_to_orthogonal() && report.connection_skew == Some(false) {
        notes.push(
            "curvature is not of full rank, so other frames could still make the connection skew"
                .into(),
        );
    }
    let stdout = match mode {
        OutputMode::Structured => to_canonical_json(&PipelineDocument {
            verdict: format!("{:?}", report.verdict),
            rank: report.rank_report.rank,
            full_rank: report.rank_report.full_rank,
            frame_unique_up_to_orthogonal: report.frame_unique_up_to_orthogonal(),
            b: report.frame_change.as_ref().map(format::rows_of),
            connection_skew: report.connection_skew,
            transformed_curvature: report
                .transformed_curvature
                .as_ref()
                .map(|f| FormMatrixFile::labeled(f, &p.labels)),
            transformed_connection: report
                .transformed_connection
                .as_ref()
                .map(ConnectionFile::canonical),
            certificate: cert_file,
        }),
        OutputMode::Human => {
            let r = &report.rank_report;
            let mut out = format!(
                "rank {} of {} ({})\n",
                r.rank,
                r.skew_space_dim,
                if r.full_rank {
                    "full rank"
                } else {
                    "not full rank"
                }
            );
            out.push_str(&certificate_text(&cert_file, &report.certificate));
            if let (Some(b), Some(t)) = (&report.frame_change, &report.transformed_curvature) {
                out.push_str("\nframe change B:\n");
                out.push_str(&matrix_text(b, "  "));
                out.push_str("\ncurvature in the new frame:\n");
                for &(i, j) in &p.labels {
                    let _ = writeln!(out, "{}:", wedge_label((i, j)));
                    out.push_str(&matrix_text(&t.term(i, j)?, "  "));
                }
            }
            if let Some(skew) = report.connection_skew {
                let _ = writeln!(
                    out,
                    "\nconnection in the new frame is {}skew-symmetric",
                    if skew { "" } else { "not " }
                );
            }
            let _ = writeln!(out, "\nverdict: {:?}", report.verdict);
            out
        }
    };
    let mut outcome = Outcome::new(Exit::of_verdict(report.verdict), stdout);
    outcome.notes = notes;
    Ok(outcome)
}
