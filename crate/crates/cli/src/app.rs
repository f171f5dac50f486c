//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skewable_core::{SkewOptions, DEFAULT_RANK_TOL};

use crate::commands::{self, CliResult, Exit, Outcome, OutputMode};

/// Environment variable holding the default solver seed.
pub const SEED_ENV: &str = "SKEWABLE_SEED";

/// Default tolerance on `‖OᵀO − I‖_F` for `factor`.
pub const FACTOR_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "skewable",
    version,
    about = "Decide whether matrices of 2-forms can be made skew-symmetric by a change of frame"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a positive finite number"))
    }
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Relative singular-value cutoff for the null space and rank (for
    /// `factor`: the orthogonality tolerance)
    #[arg(long, global = true, value_parser = positive)]
    pub tol: Option<f64>,
    /// Acceptance margin for positive definiteness, relative to the spectral norm
    #[arg(long, global = true, value_parser = positive)]
    pub eps_pd: Option<f64>,
    /// Tolerance on the skew residual of each conjugated matrix
    #[arg(long, global = true, value_parser = positive)]
    pub skew_tol: Option<f64>,
    /// Random restarts of the positive-definite search
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Solver seed
    #[arg(long, global = true, env = SEED_ENV)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Human)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Human,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coefficient matrix of each wedge basis element
    Decompose { form: PathBuf },
    /// Count linearly independent coefficient matrices
    Rank { form: PathBuf },
    /// Search for a frame change that makes every coefficient skew-symmetric
    Skewable {
        form: PathBuf,
        /// Also write the certificate to this file
        #[arg(long, short = 'c')]
        certificate: Option<PathBuf>,
    },
    /// Re-check a certificate against the input it was computed for
    Verify { certificate: PathBuf, form: PathBuf },
    /// Compute O = V^-1 U for two skew-symmetrizers and test orthogonality
    Factor {
        /// Matrix file, or a certificate whose U is used
        u: PathBuf,
        v: PathBuf,
        /// Rescale V to the determinant of U first
        #[arg(long)]
        equalize_det: bool,
    },
    /// Curvature test, optionally followed by the connection test
    Pipeline {
        form: PathBuf,
        #[arg(long)]
        connection: Option<PathBuf>,
    },
}

impl GlobalArgs {
    pub fn options(&self) -> SkewOptions {
        let d = SkewOptions::default();
        SkewOptions {
            null_tol: self.tol.unwrap_or(d.null_tol),
            eps_pd: self.eps_pd.unwrap_or(d.eps_pd),
            skew_tol: self.skew_tol.unwrap_or(d.skew_tol),
            restarts: self.restarts.unwrap_or(d.restarts),
            rng_seed: self.seed.unwrap_or(d.rng_seed),
            ..d
        }
    }

    fn mode(&self) -> OutputMode {
        match self.output {
            Output::Human => OutputMode::Human,
            Output::Structured => OutputMode::Structured,
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    let mode = g.mode();
    match &cli.command {
        Command::Decompose { form } => commands::decompose_cmd(form, mode),
        Command::Rank { form } => commands::rank_cmd(form, g.tol.unwrap_or(DEFAULT_RANK_TOL), mode),
        Command::Skewable { form, certificate } => {
            commands::skewable_cmd(form, &g.options(), certificate.as_deref(), mode)
        }
        Command::Verify { certificate, form } => {
            commands::verify_cmd(certificate, form, g.skew_tol, mode)
        }
        Command::Factor { u, v, equalize_det } => {
            commands::factor_cmd(u, v, g.tol.unwrap_or(FACTOR_TOL), *equalize_det, mode)
        }
        Command::Pipeline { form, connection } => {
            commands::pipeline_cmd(form, connection.as_deref(), &g.options(), mode)
        }
    }
}

/// Parses `args`, runs the command and writes its output. Returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                Exit::Usage.code()
            } else {
                0
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            for note in &outcome.notes {
                let _ = writeln!(stderr, "note: {note}");
            }
            outcome.exit.code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit().code()
        }
    }
}
