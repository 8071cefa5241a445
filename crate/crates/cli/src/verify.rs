//! `verify FILE LOGFILE`: recomputes a report's certificate from the input.

use matlog::format::{parse_matrix_value, ParsedMatrix};
use matlog::spectral::eigen_backward_error;
use matlog::{expm, log_residual, ComplexMatrix, Prefix, RealMatrix, Spectrum, Tolerance, WeakSchurForm};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::report::{Failure, Outcome, Report};

/// A decoded LOGFILE: a bare matrix file holding `B`, or a full report.
#[derive(Debug, Clone, PartialEq)]
pub enum LogFile {
    Matrix(ParsedMatrix),
    Report(Box<Report>),
}

pub fn parse_log_file(bytes: &[u8]) -> Result<LogFile, Failure> {
    let value: Value = serde_json::from_slice(bytes)
        .map_err(|e| Failure::from(matlog::format::FormatError::from(e)))?;
    if value.get("operation").is_some() {
        let report: Report = serde_json::from_value(value)
            .map_err(|e| Failure::input("ParseError", format!("report: {e}")))?;
        Ok(LogFile::Report(Box::new(report)))
    } else {
        Ok(LogFile::Matrix(parse_matrix_value(&value)?))
    }
}

fn real(m: &ParsedMatrix, what: &str) -> Result<RealMatrix, Failure> {
    m.clone()
        .into_real()
        .ok_or_else(|| Failure::input("FieldMismatch", format!("{what} must be a real-field matrix")))
}

fn field<'a>(output: &'a Value, key: &str) -> Result<&'a Value, Failure> {
    output
        .get(key)
        .ok_or_else(|| Failure::input("ParseError", format!("report output: missing `{key}`")))
}

/// `||e^B - target||_F / max(1, ||target||_F)`, promoting to complex when
/// either side is complex.
pub fn log_certificate(log: &ParsedMatrix, target: &ParsedMatrix) -> Result<f64, Failure> {
    let r = match (log, target) {
        (ParsedMatrix::Real(b), ParsedMatrix::Real(a)) => log_residual(b, a)?,
        _ => log_residual(&log.to_complex(), &target.to_complex())?,
    };
    Ok(r)
}

/// `||E e^{-A} - I||_F`.
pub fn expm_certificate(a: &ParsedMatrix, e: &ParsedMatrix) -> Result<f64, Failure> {
    let (a, e) = (a.to_complex(), e.to_complex());
    e.expect_dim(a.dim())?;
    let inv = expm(&a.scale(-1.0))?;
    Ok((&e * &inv).distance(&ComplexMatrix::identity(a.dim())))
}

/// `max(||Q^T Q - I||_F, ||Q^T M Q - T||_F / max(1, ||M||_F))`.
pub fn schur_certificate(m: &RealMatrix, form: &WeakSchurForm) -> Result<f64, Failure> {
    form.q.expect_dim(m.dim())?;
    form.t.expect_dim(m.dim())?;
    Ok(form
        .orthogonality_error()
        .max(form.similarity_error(m) / m.frobenius_norm().max(1.0)))
}

/// `||prefix e^{B1} e^{B2} - M||_F / ||M||_F`.
pub fn factor_certificate(
    m: &RealMatrix,
    prefix: Prefix,
    b1: &RealMatrix,
    b2: &RealMatrix,
) -> Result<f64, Failure> {
    b1.expect_dim(m.dim())?;
    b2.expect_dim(m.dim())?;
    let p = prefix.apply_left(&(&expm(b1)? * &expm(b2)?));
    Ok(p.distance(m) / m.frobenius_norm())
}

pub fn eig_certificate(a: &ParsedMatrix, eigenvalues: Vec<Complex64>) -> Result<f64, Failure> {
    if eigenvalues.len() != a.dim() {
        return Err(Failure::input(
            "DimensionMismatch",
            format!("expected {} eigenvalues, found {}", a.dim(), eigenvalues.len()),
        ));
    }
    Ok(eigen_backward_error(&a.to_complex(), &Spectrum::new(eigenvalues)))
}

fn parse_eigenvalues(v: &Value) -> Result<Vec<Complex64>, Failure> {
    let bad = || Failure::input("ParseError", "report output: `eigenvalues` must be [re, im] pairs");
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|z| match z.as_array().map(Vec::as_slice) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) if re.is_finite() && im.is_finite() => Ok(Complex64::new(re, im)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        })
        .collect()
}

fn recompute(a: &ParsedMatrix, report: &Report) -> Result<f64, Failure> {
    let out = &report.output;
    match report.operation.as_str() {
        "logm" | "logm-real" => log_certificate(&parse_matrix_value(out)?, a),
        "sqlog" => {
            let x = real(a, "sqlog input")?;
            log_certificate(&parse_matrix_value(out)?, &ParsedMatrix::Real(&x * &x))
        }
        "double-log" => {
            let x = real(a, "double-log input")?;
            log_certificate(
                &parse_matrix_value(out)?,
                &ParsedMatrix::Real(RealMatrix::block_diag(&x, &x)),
            )
        }
        "expm" => expm_certificate(a, &parse_matrix_value(out)?),
        "factor" => {
            let m = real(a, "factor input")?;
            let prefix: Prefix = serde_json::from_value(field(out, "prefix")?.clone())
                .map_err(|e| Failure::input("ParseError", format!("report output: prefix: {e}")))?;
            let b1 = real(&parse_matrix_value(field(out, "b1")?)?, "b1")?;
            let b2 = real(&parse_matrix_value(field(out, "b2")?)?, "b2")?;
            factor_certificate(&m, prefix, &b1, &b2)
        }
        "schur" => {
            let m = real(a, "schur input")?;
            let form = WeakSchurForm {
                q: real(&parse_matrix_value(field(out, "q")?)?, "q")?,
                t: real(&parse_matrix_value(field(out, "t")?)?, "t")?,
                k: field(out, "k")?.as_u64().unwrap_or(0) as usize,
            };
            schur_certificate(&m, &form)
        }
        "eig" => eig_certificate(a, parse_eigenvalues(field(out, "eigenvalues")?)?),
        other => Err(Failure::input(
            "UnsupportedOperation",
            format!("cannot verify a `{other}` report"),
        )),
    }
}

/// Recomputes the certificate of `log` against the matrix `a`.
pub fn verify(a: &ParsedMatrix, digest: &str, log: &LogFile, tol: &Tolerance) -> Result<Outcome, Failure> {
    let (operation, reported, digest_match, residual) = match log {
        LogFile::Matrix(b) => ("logm".to_string(), None, None, log_certificate(b, a)?),
        LogFile::Report(report) => {
            if !report.is_ok() {
                return Err(Failure::input("ReportNotOk", "LOGFILE reports a failed operation"));
            }
            let matches = report.input_digest.as_deref().map(|d| d == digest);
            (report.operation.clone(), report.residual, matches, recompute(a, report)?)
        }
    };
    let failure = (!(residual <= tol.residual_tol)).then(|| {
        Failure::numerical(
            "VerificationFailed",
            format!("recomputed residual {residual:e} exceeds tolerance {:e}", tol.residual_tol),
        )
    });
    Ok(Outcome {
        output: json!({
            "verified_operation": operation,
            "reported_residual": reported,
            "recomputed_residual": residual,
            "digest_match": digest_match,
        }),
        residual: Some(residual),
        trace: None,
        failure,
    })
}
