//! On-disk documents: form matrices, connection matrices, plain matrices and
//! certificates.
//!
//! Inputs may be written in TOML or JSON; a document whose first
//! non-blank character is `{` is read as JSON. Everything this crate writes is
//! canonical JSON from [`crate::number`].

use std::collections::HashSet;
use std::ops::Range;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use skewable_core::{
    ConnectionMatrix, FormBasis, FormMatrix, Matrix, Obstruction, SkewCertificate, SkewOptions,
    SkewStatus,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FileError {
    #[error("{syntax} error at line {line}, column {column}: {message}")]
    Syntax {
        syntax: &'static str,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> FileError {
    FileError::Field {
        field: field.into(),
        message: message.into(),
    }
}

pub fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Deserializes a TOML or JSON document.
pub fn from_text<T: DeserializeOwned>(text: &str) -> Result<T, FileError> {
    if is_json(text) {
        serde_json::from_str(text).map_err(|e| FileError::Syntax {
            syntax: "JSON",
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    } else {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map_or((0, 0), |Range { start, .. }| line_column(text, start));
            FileError::Syntax {
                syntax: "TOML",
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })
    }
}

pub type Rows = Vec<Vec<f64>>;

pub fn rows_of(m: &Matrix) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Checks shape and finiteness of `rows` and converts.
pub fn matrix_from_rows(rows: &Rows, size: usize, field: &str) -> Result<Matrix, FileError> {
    if rows.len() != size {
        return Err(field_error(
            field,
            format!("expected {size} rows, found {}", rows.len()),
        ));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != size {
            return Err(field_error(
                format!("{field} row {}", r + 1),
                format!("expected {size} entries, found {}", row.len()),
            ));
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(field_error(
                format!("{field} row {} entry {}", r + 1, c + 1),
                "entries must be finite",
            ));
        }
    }
    Ok(Matrix::from_fn(size, size, |i, j| rows[i][j]))
}

fn parse_index(part: &str, n: usize) -> Option<usize> {
    let digits = part.trim().strip_prefix('e')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let k: usize = digits.parse().ok()?;
    (1..=n).contains(&k).then(|| k - 1)
}

/// `"e3^e1"` → `(2, 0)`. Indices are one-based in text, zero-based here.
pub fn parse_wedge_label(label: &str, n: usize) -> Result<(usize, usize), String> {
    let mut parts = label.split(['^', '∧']);
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!("`{label}` is not of the form eI^eJ"));
    };
    let (Some(i), Some(j)) = (parse_index(a, n), parse_index(b, n)) else {
        return Err(format!("`{label}` needs indices between 1 and {n}"));
    };
    if i == j {
        return Err(format!("`{label}` repeats an index"));
    }
    Ok((i, j))
}

pub fn parse_one_form_label(label: &str, n: usize) -> Result<usize, String> {
    parse_index(label, n).ok_or_else(|| format!("`{label}` is not one of e1..e{n}"))
}

pub fn wedge_label((i, j): (usize, usize)) -> String {
    format!("e{}^e{}", i + 1, j + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub label: String,
    pub matrix: Rows,
}

/// A matrix of 2-forms, `Σ label · matrix`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormMatrixFile {
    pub form_dim: usize,
    pub size: usize,
    /// Declared wedge labels, in any order and orientation. When present,
    /// every term must use one of them (either orientation).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_labels: Option<Vec<String>>,
    #[serde(default)]
    pub terms: Vec<Term>,
}

/// A parsed form matrix together with the labels to present it under.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedForm {
    pub form: FormMatrix,
    /// Oriented pairs covering every wedge slot once: the declared basis (or,
    /// without one, the term labels as written) followed by any remaining
    /// slots in lexicographic order.
    pub labels: Vec<(usize, usize)>,
}

impl FormMatrixFile {
    pub fn parse(text: &str) -> Result<ParsedForm, FileError> {
        from_text::<Self>(text)?.to_form()
    }

    pub fn to_form(&self) -> Result<ParsedForm, FileError> {
        let n = self.form_dim;
        let basis = FormBasis::new(n).map_err(|e| field_error("form_dim", e.to_string()))?;
        if self.size == 0 {
            return Err(field_error("size", "must be at least 1"));
        }
        let slot = |pair: (usize, usize)| basis.oriented_slot(pair.0, pair.1).expect("validated").0;

        let declared = match &self.basis_labels {
            None => None,
            Some(labels) => {
                let mut seen = HashSet::new();
                let mut pairs = Vec::with_capacity(labels.len());
                for (k, label) in labels.iter().enumerate() {
                    let field = format!("basis_labels[{k}]");
                    let pair = parse_wedge_label(label, n).map_err(|m| field_error(&field, m))?;
                    if !seen.insert(slot(pair)) {
                        return Err(field_error(
                            field,
                            format!("`{label}` repeats an earlier label"),
                        ));
                    }
                    pairs.push(pair);
                }
                Some((pairs, seen))
            }
        };

        let mut used = HashSet::new();
        let mut parsed = Vec::with_capacity(self.terms.len());
        for (k, term) in self.terms.iter().enumerate() {
            let field = format!("terms[{k}].label");
            let pair = parse_wedge_label(&term.label, n).map_err(|m| field_error(&field, m))?;
            if let Some((_, allowed)) = &declared {
                if !allowed.contains(&slot(pair)) {
                    return Err(field_error(
                        field,
                        format!("`{}` is not in basis_labels", term.label),
                    ));
                }
            }
            if !used.insert(slot(pair)) {
                return Err(field_error(
                    field,
                    format!("`{}` repeats an earlier term", term.label),
                ));
            }
            let m = matrix_from_rows(&term.matrix, self.size, &format!("terms[{k}].matrix"))?;
            parsed.push((pair, m));
        }

        let (mut labels, listed) = match declared {
            Some(d) => d,
            None => (parsed.iter().map(|(p, _)| *p).collect(), used),
        };
        labels.extend(
            basis
                .wedges()
                .map(|w| (w.i, w.j))
                .filter(|&p| !listed.contains(&slot(p))),
        );
        let form = FormMatrix::from_labeled_terms(basis, self.size, parsed)
            .map_err(|e| field_error("terms", e.to_string()))?;
        Ok(ParsedForm { form, labels })
    }

    /// Every slot, in lexicographic order.
    pub fn canonical(form: &FormMatrix) -> Self {
        let pairs: Vec<_> = form.basis().wedges().map(|w| (w.i, w.j)).collect();
        let mut file = Self::labeled(form, &pairs);
        file.basis_labels = None;
        file
    }

    /// Every slot under the given oriented labels, which are also declared.
    pub fn labeled(form: &FormMatrix, labels: &[(usize, usize)]) -> Self {
        Self {
            form_dim: form.basis().dim(),
            size: form.size(),
            basis_labels: Some(labels.iter().copied().map(wedge_label).collect()),
            terms: labels
                .iter()
                .map(|&(i, j)| Term {
                    label: wedge_label((i, j)),
                    matrix: rows_of(&form.term(i, j).expect("label in basis")),
                })
                .collect(),
        }
    }
}

/// A matrix of 1-forms, `Σ label · matrix` with labels `e1..en`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    pub form_dim: usize,
    pub size: usize,
    #[serde(default)]
    pub terms: Vec<Term>,
}

impl ConnectionFile {
    pub fn parse(text: &str) -> Result<ConnectionMatrix, FileError> {
        from_text::<Self>(text)?.to_connection()
    }

    pub fn to_connection(&self) -> Result<ConnectionMatrix, FileError> {
        let n = self.form_dim;
        if n == 0 {
            return Err(field_error("form_dim", "must be at least 1"));
        }
        if self.size == 0 {
            return Err(field_error("size", "must be at least 1"));
        }
        let mut terms: Vec<Option<Matrix>> = vec![None; n];
        for (k, term) in self.terms.iter().enumerate() {
            let field = format!("terms[{k}].label");
            let i = parse_one_form_label(&term.label, n).map_err(|m| field_error(&field, m))?;
            if terms[i].is_some() {
                return Err(field_error(
                    field,
                    format!("`{}` repeats an earlier term", term.label),
                ));
            }
            terms[i] = Some(matrix_from_rows(
                &term.matrix,
                self.size,
                &format!("terms[{k}].matrix"),
            )?);
        }
        let terms = terms
            .into_iter()
            .map(|t| t.unwrap_or_else(|| Matrix::zeros(self.size, self.size)))
            .collect();
        ConnectionMatrix::new(self.size, terms).map_err(|e| field_error("terms", e.to_string()))
    }

    pub fn canonical(conn: &ConnectionMatrix) -> Self {
        Self {
            form_dim: conn.form_dim(),
            size: conn.size(),
            terms: conn
                .terms()
                .iter()
                .enumerate()
                .map(|(i, t)| Term {
                    label: format!("e{}", i + 1),
                    matrix: rows_of(t),
                })
                .collect(),
        }
    }
}

/// A square matrix, either as `matrix = [[..], ..]` or as the `U` of a
/// certificate.
#[derive(Debug, Clone, Deserialize)]
struct MatrixSource {
    matrix: Option<Rows>,
    #[serde(rename = "U", default)]
    u: Option<Rows>,
}

pub fn parse_matrix(text: &str) -> Result<Matrix, FileError> {
    let source: MatrixSource = from_text(text)?;
    let (rows, field) = match (source.matrix, source.u) {
        (Some(rows), _) => (rows, "matrix"),
        (None, Some(rows)) => (rows, "U"),
        (None, None) => return Err(field_error("matrix", "missing (no `matrix` or `U` key)")),
    };
    let size = rows.len();
    if size == 0 {
        return Err(field_error(field, "empty matrix"));
    }
    matrix_from_rows(&rows, size, field)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatusName {
    Skewable,
    NotSkewable,
    Indeterminate,
}

impl From<SkewStatus> for StatusName {
    fn from(s: SkewStatus) -> Self {
        match s {
            SkewStatus::Skewable => Self::Skewable,
            SkewStatus::NotSkewable => Self::NotSkewable,
            SkewStatus::Indeterminate => Self::Indeterminate,
        }
    }
}

impl From<StatusName> for SkewStatus {
    fn from(s: StatusName) -> Self {
        match s {
            StatusName::Skewable => Self::Skewable,
            StatusName::NotSkewable => Self::NotSkewable,
            StatusName::Indeterminate => Self::Indeterminate,
        }
    }
}

/// Floats that may legitimately be infinite, written as strings then.
mod extended_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!(
                    "`{other}` is not a number"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObstructionRecord {
    Trace {
        index: usize,
        label: String,
        trace: f64,
    },
    Spectrum {
        index: usize,
        label: String,
        real_part: f64,
    },
    NoSolution,
    IndefiniteGenerator,
    SearchFailed {
        #[serde(with = "extended_float")]
        best_ratio: f64,
    },
    Verification {
        #[serde(with = "extended_float")]
        worst_residual: f64,
    },
}

impl ObstructionRecord {
    pub fn new(o: Obstruction, labels: &[(usize, usize)]) -> Self {
        let label = |index: usize| {
            labels
                .get(index)
                .copied()
                .map(wedge_label)
                .unwrap_or_default()
        };
        match o {
            Obstruction::Trace { index, trace } => Self::Trace {
                index,
                label: label(index),
                trace,
            },
            Obstruction::Spectrum { index, real_part } => Self::Spectrum {
                index,
                label: label(index),
                real_part,
            },
            Obstruction::NoSolution => Self::NoSolution,
            Obstruction::IndefiniteGenerator => Self::IndefiniteGenerator,
            Obstruction::SearchFailed { best_ratio } => Self::SearchFailed { best_ratio },
            Obstruction::Verification { worst_residual } => Self::Verification { worst_residual },
        }
    }

    pub fn obstruction(&self) -> Obstruction {
        match *self {
            Self::Trace { index, trace, .. } => Obstruction::Trace { index, trace },
            Self::Spectrum {
                index, real_part, ..
            } => Obstruction::Spectrum { index, real_part },
            Self::NoSolution => Obstruction::NoSolution,
            Self::IndefiniteGenerator => Obstruction::IndefiniteGenerator,
            Self::SearchFailed { best_ratio } => Obstruction::SearchFailed { best_ratio },
            Self::Verification { worst_residual } => Obstruction::Verification { worst_residual },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub null_tol: f64,
    pub eps_pd: f64,
    pub skew_tol: f64,
    pub reject_tol: f64,
}

/// A solver result with the options that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub status: StatusName,
    pub size: usize,
    #[serde(rename = "A")]
    pub a: Option<Rows>,
    #[serde(rename = "U")]
    pub u: Option<Rows>,
    #[serde(rename = "lambda_min_A")]
    pub lambda_min_a: Option<f64>,
    pub skew_residuals: Vec<f64>,
    pub null_space_dim: Option<usize>,
    pub obstruction: Option<ObstructionRecord>,
    pub tolerances: Tolerances,
    pub quick_reject: bool,
    pub restarts: usize,
    pub seed: u64,
}

impl CertificateFile {
    /// `labels[k]` names the `k`-th member of the solved set.
    pub fn new(
        cert: &SkewCertificate,
        size: usize,
        opts: &SkewOptions,
        labels: &[(usize, usize)],
    ) -> Self {
        Self {
            status: cert.status.into(),
            size,
            a: cert.a.as_ref().map(rows_of),
            u: cert.u.as_ref().map(rows_of),
            lambda_min_a: cert.lambda_min_a,
            skew_residuals: cert.skew_residuals.clone(),
            null_space_dim: cert.null_space_dim,
            obstruction: cert.obstruction.map(|o| ObstructionRecord::new(o, labels)),
            tolerances: Tolerances {
                null_tol: opts.null_tol,
                eps_pd: opts.eps_pd,
                skew_tol: opts.skew_tol,
                reject_tol: opts.reject_tol,
            },
            quick_reject: opts.quick_reject,
            restarts: opts.restarts,
            seed: opts.rng_seed,
        }
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let file: Self = from_text(text)?;
        file.certificate()?;
        Ok(file)
    }

    pub fn options(&self) -> SkewOptions {
        SkewOptions {
            null_tol: self.tolerances.null_tol,
            eps_pd: self.tolerances.eps_pd,
            skew_tol: self.tolerances.skew_tol,
            reject_tol: self.tolerances.reject_tol,
            restarts: self.restarts,
            rng_seed: self.seed,
            quick_reject: self.quick_reject,
        }
    }

    /// The certificate, after checking matrix shapes.
    pub fn certificate(&self) -> Result<SkewCertificate, FileError> {
        if self.size == 0 {
            return Err(field_error("size", "must be at least 1"));
        }
        let matrix = |rows: &Option<Rows>, field| {
            rows.as_ref()
                .map(|r| matrix_from_rows(r, self.size, field))
                .transpose()
        };
        Ok(SkewCertificate {
            status: self.status.into(),
            a: matrix(&self.a, "A")?,
            u: matrix(&self.u, "U")?,
            lambda_min_a: self.lambda_min_a,
            skew_residuals: self.skew_residuals.clone(),
            null_space_dim: self.null_space_dim,
            obstruction: self
                .obstruction
                .as_ref()
                .map(ObstructionRecord::obstruction),
        })
    }
}
