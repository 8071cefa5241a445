//! Report documents written to standard output.

use matlog::format::{emit, FileEntry};
use matlog::{ContinuationTrace, ErrorKind, Matrix};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Failure carried by a report and mapped to an exit code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub code: String,
    pub kind: Kind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Domain,
    Input,
    Numerical,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Domain => 2,
            Kind::Input => 3,
            Kind::Numerical => 4,
        }
    }
}

impl From<ErrorKind> for Kind {
    fn from(k: ErrorKind) -> Self {
        match k {
            ErrorKind::Domain => Kind::Domain,
            ErrorKind::Input => Kind::Input,
            ErrorKind::Numerical => Kind::Numerical,
        }
    }
}

impl Failure {
    pub fn input(code: &str, message: impl Into<String>) -> Self {
        Failure {
            code: code.into(),
            kind: Kind::Input,
            message: message.into(),
        }
    }

    pub fn numerical(code: &str, message: impl Into<String>) -> Self {
        Failure {
            code: code.into(),
            kind: Kind::Numerical,
            message: message.into(),
        }
    }
}

impl From<matlog::Error> for Failure {
    fn from(e: matlog::Error) -> Self {
        Failure {
            code: e.code().into(),
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

impl From<matlog::format::FormatError> for Failure {
    fn from(e: matlog::format::FormatError) -> Self {
        Failure::input("ParseError", e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Status {
    Ok(OkTag),
    Error { error: Failure },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OkTag {
    Ok,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub steps: usize,
    pub bisections: usize,
    pub refinements: usize,
}

impl From<&ContinuationTrace> for TraceSummary {
    fn from(t: &ContinuationTrace) -> Self {
        TraceSummary {
            steps: t.steps.len(),
            bisections: t.bisections,
            refinements: t.refinements,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceEcho {
    pub residual_tol: f64,
    pub contraction_target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub operation: String,
    /// Hex SHA-256 of the input file bytes.
    pub input_digest: Option<String>,
    pub status: Status,
    pub tolerance: ToleranceEcho,
    #[serde(default)]
    pub output: Value,
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_summary: Option<TraceSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match &self.status {
            Status::Ok(_) => 0,
            Status::Error { error } => error.kind.exit_code(),
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self.status, Status::Ok(_))
    }
}

/// Successful payload of one subcommand.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub output: Value,
    pub residual: Option<f64>,
    pub trace: Option<ContinuationTrace>,
    /// Set when the command completed but its own check failed.
    pub failure: Option<Failure>,
}

impl Outcome {
    pub fn matrix<T: FileEntry>(m: &Matrix<T>, residual: f64) -> Self {
        Outcome {
            output: emit(m),
            residual: Some(residual),
            ..Default::default()
        }
    }
}

pub fn trace_json(t: &ContinuationTrace) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| json!({"t": s.t, "contraction": s.contraction, "series_terms": s.series_terms}))
        .collect();
    json!({
        "steps": steps,
        "final_residual": t.final_residual,
        "bisections": t.bisections,
        "refinements": t.refinements,
    })
}
