//! Logarithms near the identity and the scalar-shift exponential construction.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Matrix, RealMatrix};
use crate::scalar::Scalar;
use crate::tolerance::Tolerance;

/// Output of [`log_series_terms`].
#[derive(Debug, Clone)]
pub struct SeriesLog<T> {
    pub log: Matrix<T>,
    /// Number of series terms summed.
    pub terms: usize,
    /// `||I - F||_F`.
    pub contraction: f64,
}

/// Smallest `N` with `r^{N+1} / ((N+1)(1-r)) < tail_tol`.
pub fn log_series_truncation(r: f64, tail_tol: f64) -> usize {
    if r == 0.0 {
        return 0;
    }
    let mut power = r; // r^{N+1} for N = 0
    let mut n = 0usize;
    while power / ((n + 1) as f64 * (1.0 - r)) >= tail_tol {
        n += 1;
        power *= r;
    }
    n
}

/// `L = -sum_{j>=1} (I - F)^j / j`, so that `e^L = F`.
///
/// Requires `||I - F||_F < 1`. The result is a polynomial in `F` and
/// commutes with it.
pub fn log_series<T: Scalar>(f: &Matrix<T>, tol: &Tolerance) -> Result<Matrix<T>> {
    Ok(log_series_terms(f, tol.series_tail_tol)?.log)
}

pub fn log_series_terms<T: Scalar>(f: &Matrix<T>, tail_tol: f64) -> Result<SeriesLog<T>> {
    f.check_finite()?;
    let n = f.dim();
    let x = &Matrix::identity(n) - f;
    let r = x.frobenius_norm();
    if !(r < 1.0) {
        return Err(Error::NotContractive { norm: r });
    }
    let terms = log_series_truncation(r, tail_tol);
    let mut log = Matrix::zeros(n);
    let mut power = Matrix::identity(n);
    for j in 1..=terms {
        power = &power * &x;
        log = &log - &power.scale(1.0 / j as f64);
    }
    Ok(SeriesLog {
        log,
        terms,
        contraction: r,
    })
}

/// `b` with `e^b = g - lambda I`, valid for `|lambda| > ||g||_F`.
///
/// Built as `(i pi + log lambda) I + log_series(I - g / lambda)` from
/// `g - lambda I = -lambda (I - g/lambda)`.
pub fn shifted_exp_log(g: &ComplexMatrix, lambda: Complex64, tol: &Tolerance) -> Result<ComplexMatrix> {
    Ok(shifted_exp_log_terms(g, lambda, tol)?.log)
}

pub(crate) fn shifted_exp_log_terms(
    g: &ComplexMatrix,
    lambda: Complex64,
    tol: &Tolerance,
) -> Result<SeriesLog<Complex64>> {
    let gnorm = g.frobenius_norm();
    if !(lambda.norm() > gnorm) {
        return Err(Error::Precondition(format!(
            "|lambda| = {} must exceed ||g||_F = {gnorm}",
            lambda.norm()
        )));
    }
    let f = (&Matrix::identity(g.dim()) - &g.scale_by(lambda.inv())).clone();
    let series = log_series_terms(&f, tol.series_tail_tol)?;
    let shift = Complex64::new(0.0, PI) + lambda.ln();
    Ok(SeriesLog {
        log: series.log.add_diag(shift),
        ..series
    })
}

/// Real-field counterpart: `b` with `e^b = m I - g` for a real `m > ||g||_F`.
pub fn real_shift_log(g: &RealMatrix, m: f64, tol: &Tolerance) -> Result<RealMatrix> {
    Ok(real_shift_log_terms(g, m, tol)?.log)
}

pub(crate) fn real_shift_log_terms(g: &RealMatrix, m: f64, tol: &Tolerance) -> Result<SeriesLog<f64>> {
    let gnorm = g.frobenius_norm();
    if !(m > gnorm) {
        return Err(Error::Precondition(format!(
            "shift {m} must exceed ||g||_F = {gnorm}"
        )));
    }
    let f = &RealMatrix::identity(g.dim()) - &g.scale(1.0 / m);
    let series = log_series_terms(&f, tol.series_tail_tol)?;
    Ok(SeriesLog {
        log: series.log.add_diag(m.ln()),
        ..series
    })
}
