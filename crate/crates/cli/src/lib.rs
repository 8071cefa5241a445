//! Command-line driver for `matlog`.
//!
//! Every subcommand prints one JSON report on standard output and exits with
//! 0 (ok), 2 (domain error), 3 (input or parse error) or 4 (numerical failure).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use matlog::acceptance::{run_all, DEFAULT_SEED};
use matlog::format::{emit, parse_matrix, ParsedMatrix};
use matlog::spectral::eigen_backward_error;
use matlog::{
    complex_path_log, doubled_block_log, eigenvalues, expm, factor, real_ray_log, real_square_log,
    real_sym_spectrum, weak_schur, RealMatrix, Tolerance,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use report::{trace_json, Failure, Kind, OkTag, Outcome, Report, Status, ToleranceEcho, TraceSummary};

#[derive(Debug, Parser)]
#[command(name = "matlog", version, about = "Certified matrix logarithms and exponential factorizations")]
pub struct Cli {
    /// Residual tolerance every certificate must meet.
    #[arg(long, global = true, value_name = "R", allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Contraction target for continuation steps, in (0, 1).
    #[arg(long, global = true, value_name = "R", allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Seed for the randomized `selftest` batches.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Include the full continuation trace in the report.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Also write the report's output section to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues (conjugate-paired for real input).
    Eig { file: PathBuf },
    /// Matrix exponential.
    Expm { file: PathBuf },
    /// Complex logarithm by ray continuation.
    Logm { file: PathBuf },
    /// Real logarithm; requires no eigenvalue on (-inf, 0].
    LogmReal { file: PathBuf },
    /// Real logarithm of the square of FILE.
    Sqlog { file: PathBuf },
    /// Two-exponential factorization, I~-prefixed for negative determinant.
    Factor { file: PathBuf },
    /// Real logarithm of blockdiag(A, A).
    DoubleLog { file: PathBuf },
    /// Weak Schur reduction.
    Schur { file: PathBuf },
    /// Recompute the residual of LOGFILE (a report or a matrix file) against FILE.
    Verify { file: PathBuf, logfile: PathBuf },
    /// Run the embedded acceptance suite.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eig { .. } => "eig",
            Command::Expm { .. } => "expm",
            Command::Logm { .. } => "logm",
            Command::LogmReal { .. } => "logm-real",
            Command::Sqlog { .. } => "sqlog",
            Command::Factor { .. } => "factor",
            Command::DoubleLog { .. } => "double-log",
            Command::Schur { .. } => "schur",
            Command::Verify { .. } => "verify",
            Command::Selftest => "selftest",
        }
    }

    fn input(&self) -> Option<&Path> {
        match self {
            Command::Eig { file }
            | Command::Expm { file }
            | Command::Logm { file }
            | Command::LogmReal { file }
            | Command::Sqlog { file }
            | Command::Factor { file }
            | Command::DoubleLog { file }
            | Command::Schur { file }
            | Command::Verify { file, .. } => Some(file),
            Command::Selftest => None,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::input("ReadError", format!("{}: {e}", path.display())))
}

fn require_real(m: ParsedMatrix, op: &str) -> Result<RealMatrix, Failure> {
    m.into_real()
        .ok_or_else(|| Failure::input("FieldMismatch", format!("`{op}` needs a real-field matrix file")))
}

fn tolerance(cli: &Cli) -> Result<Tolerance, Failure> {
    let mut tol = Tolerance::default();
    if let Some(r) = cli.tol {
        tol = tol.with_residual(r);
    }
    if let Some(eta) = cli.eta {
        tol = tol.with_contraction(eta);
    }
    tol.validate()?;
    Ok(tol)
}

fn log_outcome<T: matlog::format::FileEntry>(r: matlog::LogResult<T>) -> Outcome {
    Outcome {
        trace: Some(r.trace.clone()),
        ..Outcome::matrix(&r.log, r.residual)
    }
}

fn selftest(seed: u64, diag: &mut dyn Write) -> Outcome {
    let outcomes = run_all(seed);
    for o in &outcomes {
        let _ = writeln!(diag, "{o}");
    }
    let criteria: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "id": o.id,
                "name": o.name,
                "passed": o.passed,
                "trials": o.trials,
                "worst_ratio": if o.worst_ratio.is_finite() { json!(o.worst_ratio) } else { Value::Null },
                "detail": o.detail,
                "elapsed_ms": o.elapsed.as_secs_f64() * 1e3,
            })
        })
        .collect();
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let worst = outcomes.iter().map(|o| o.worst_ratio).fold(0.0, f64::max);
    Outcome {
        output: json!({"seed": seed, "criteria": criteria}),
        residual: Some(worst),
        trace: None,
        failure: (!failed.is_empty())
            .then(|| Failure::numerical("SelftestFailed", format!("criteria failed: {failed:?}"))),
    }
}

fn execute(cli: &Cli, tol: &Tolerance, digest: Option<&str>, diag: &mut dyn Write) -> Result<Outcome, Failure> {
    let op = cli.command.name();
    let load = |path: &Path| -> Result<ParsedMatrix, Failure> { Ok(parse_matrix(&read(path)?)?) };
    let input = match cli.command.input() {
        Some(path) => Some(load(path)?),
        None => None,
    };
    let input = || input.clone().expect("subcommand has an input file");

    Ok(match &cli.command {
        Command::Eig { .. } => {
            let a = input();
            let spectrum = match &a {
                ParsedMatrix::Real(m) => real_sym_spectrum(m)?,
                ParsedMatrix::Complex(m) => eigenvalues(m)?,
            };
            let values: Vec<Value> = spectrum.iter().map(|z| json!([z.re, z.im])).collect();
            Outcome {
                output: json!({"eigenvalues": values}),
                residual: Some(eigen_backward_error(&a.to_complex(), &spectrum)),
                ..Default::default()
            }
        }
        Command::Expm { .. } => {
            let a = input();
            let e = match &a {
                ParsedMatrix::Real(m) => ParsedMatrix::Real(expm(m)?),
                ParsedMatrix::Complex(m) => ParsedMatrix::Complex(expm(m)?),
            };
            let residual = verify::expm_certificate(&a, &e)?;
            Outcome {
                output: e.to_value(),
                residual: Some(residual),
                ..Default::default()
            }
        }
        Command::Logm { .. } => log_outcome(complex_path_log(&input().to_complex(), tol)?),
        Command::LogmReal { .. } => log_outcome(real_ray_log(&require_real(input(), op)?, tol)?),
        Command::Sqlog { .. } => log_outcome(real_square_log(&require_real(input(), op)?, tol)?),
        Command::DoubleLog { .. } => {
            let d = doubled_block_log(&require_real(input(), op)?, tol)?;
            log_outcome(d.result)
        }
        Command::Factor { .. } => {
            let m = require_real(input(), op)?;
            let f = factor(&m, tol)?;
            Outcome {
                output: json!({
                    "prefix": f.prefix,
                    "k_negative": f.k_negative,
                    "b1": emit(&f.b1),
                    "b2": emit(&f.b2),
                }),
                residual: Some(verify::factor_certificate(&m, f.prefix, &f.b1, &f.b2)?),
                ..Default::default()
            }
        }
        Command::Schur { .. } => {
            let m = require_real(input(), op)?;
            let w = weak_schur(&m)?;
            Outcome {
                output: json!({
                    "k": w.k,
                    "real_eigenvalues": w.real_eigenvalues(),
                    "q": emit(&w.q),
                    "t": emit(&w.t),
                }),
                residual: Some(verify::schur_certificate(&m, &w)?),
                ..Default::default()
            }
        }
        Command::Verify { logfile, .. } => {
            let log = verify::parse_log_file(&read(logfile)?)?;
            verify::verify(&input(), digest.unwrap_or_default(), &log, tol)?
        }
        Command::Selftest => selftest(cli.seed.unwrap_or(DEFAULT_SEED), diag),
    })
}

fn write_out(path: &Path, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("output serializes");
    std::fs::write(path, text + "\n")
        .map_err(|e| Failure::input("WriteError", format!("{}: {e}", path.display())))
}

/// Runs one parsed invocation and returns its report.
pub fn report(cli: &Cli, diag: &mut dyn Write) -> Report {
    let digest = cli
        .command
        .input()
        .and_then(|p| std::fs::read(p).ok())
        .map(|bytes| sha256_hex(&bytes));
    let tol = tolerance(cli);
    let echo = {
        let t = tol.clone().unwrap_or_default();
        ToleranceEcho {
            residual_tol: cli.tol.unwrap_or(t.residual_tol),
            contraction_target: cli.eta.unwrap_or(t.contraction_target),
        }
    };
    let result = tol.and_then(|tol| execute(cli, &tol, digest.as_deref(), diag));
    let result = result.and_then(|outcome| match (&cli.out, &outcome.failure) {
        (Some(path), None) => write_out(path, &outcome.output).map(|_| outcome),
        _ => Ok(outcome),
    });

    let (status, outcome) = match result {
        Ok(mut o) => match o.failure.take() {
            Some(error) => (Status::Error { error }, o),
            None => (Status::Ok(OkTag::Ok), o),
        },
        Err(error) => (Status::Error { error }, Outcome::default()),
    };
    Report {
        operation: cli.command.name().into(),
        input_digest: digest,
        status,
        tolerance: echo,
        output: outcome.output,
        residual: outcome.residual,
        trace_summary: outcome.trace.as_ref().map(TraceSummary::from),
        trace: if cli.trace { outcome.trace.as_ref().map(trace_json) } else { None },
    }
}

/// Parses `args`, runs the subcommand, prints the report and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    Kind::Input.exit_code()
                }
            };
        }
    };
    let report = report(&cli, stderr);
    if let Status::Error { error } = &report.status {
        let _ = writeln!(stderr, "error[{}]: {}", error.code, error.message);
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    let _ = writeln!(stdout, "{text}");
    report.exit_code()
}
