//! Pointwise metric-compatibility test for a curvature matrix, optionally
//! followed by the skewness test on the connection matrix in the new frame.
//!
//! The frame change `B` is constant, so both the curvature and the connection
//! transform by plain conjugation `B⁻¹(·)B`.

use crate::decompose::{decompose, rank, RankReport};
use crate::error::{Error, Result};
use crate::exterior::{ConnectionMatrix, FormMatrix};
use crate::linalg::Matrix;
use crate::solver::{is_skew, skew_symmetrize, SkewCertificate, SkewOptions, SkewStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// The curvature is not skewable in any frame, or the connection failed
    /// the skewness test in the constructed frame.
    NotMetricObstruction,
    /// Curvature is skew in the new frame; no connection was supplied.
    PassesCurvatureTest,
    /// Curvature and connection are both skew in the new frame, so the metric
    /// making that frame orthonormal is the candidate compatible metric.
    PassesConnectionTest,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub rank_report: RankReport,
    pub certificate: SkewCertificate,
    /// Frame change `B = U`, present iff the curvature is skewable.
    pub frame_change: Option<Matrix>,
    pub transformed_curvature: Option<FormMatrix>,
    pub transformed_connection: Option<ConnectionMatrix>,
    pub connection_skew: Option<bool>,
    pub verdict: Verdict,
}

impl PipelineReport {
    /// Without full rank the frame is not unique up to orthogonal factors,
    /// so a failed connection test does not rule out other frames.
    pub fn frame_unique_up_to_orthogonal(&self) -> bool {
        self.rank_report.full_rank
    }
}

pub fn run_pipeline(
    curvature: &FormMatrix,
    connection: Option<&ConnectionMatrix>,
    opts: &SkewOptions,
) -> Result<PipelineReport> {
    if let Some(conn) = connection {
        if conn.size() != curvature.size() {
            return Err(Error::DimensionMismatch {
                expected: curvature.size(),
                found: conn.size(),
            });
        }
        if conn.form_dim() != curvature.basis().dim() {
            return Err(Error::DimensionMismatch {
                expected: curvature.basis().dim(),
                found: conn.form_dim(),
            });
        }
    }
    let set = decompose(curvature);
    let rank_report = rank(&set, opts.null_tol)?;
    let certificate = skew_symmetrize(&set, opts)?;

    let mut report = PipelineReport {
        rank_report,
        frame_change: None,
        transformed_curvature: None,
        transformed_connection: None,
        connection_skew: None,
        verdict: match certificate.status {
            SkewStatus::Skewable => Verdict::PassesCurvatureTest,
            SkewStatus::NotSkewable => Verdict::NotMetricObstruction,
            SkewStatus::Indeterminate => Verdict::Indeterminate,
        },
        certificate,
    };
    let Some(b) = report.certificate.u.clone() else {
        return Ok(report);
    };
    report.transformed_curvature = Some(curvature.conjugate(&b)?);
    if let Some(conn) = connection {
        let transformed = conn.conjugate(&b)?;
        let skew = transformed
            .terms()
            .iter()
            .all(|t| is_skew(t, opts.skew_tol));
        report.verdict = if skew {
            Verdict::PassesConnectionTest
        } else {
            Verdict::NotMetricObstruction
        };
        report.connection_skew = Some(skew);
        report.transformed_connection = Some(transformed);
    }
    report.frame_change = Some(b);
    Ok(report)
}
