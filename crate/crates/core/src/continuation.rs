//! Path-following logarithms.
//!
//! Every variant walks a path `Phi(t)` of invertible matrices from a start
//! `t0`, where `Phi(t0)` has a logarithm by the log series, down to
//! `Phi(0)`, the matrix whose logarithm is wanted. A step from `t` to `t'`
//! is accepted when `||e^{-h} Phi(t') - I||_F <= eta`; the running logarithm
//! then advances by `log_series(Phi(t)^{-1} Phi(t'))`, and a final correction
//! by `log_series(e^{-h} Phi(0))` removes drift if the certificate misses. Every increment
//! is a function of the input matrix, so the result commutes with it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm::expm_with_tail;
use crate::lu::Lu;
use crate::matrix::{ComplexMatrix, Matrix, RealMatrix};
use crate::scalar::Scalar;
use crate::series::{log_series_terms, real_shift_log_terms, shifted_exp_log_terms, SeriesLog};
use crate::spectral::{eigenvalues, first_on_negative_axis, real_sym_spectrum, select_ray, ArcSpec};
use crate::tolerance::Tolerance;

/// Hard cap on accepted plus rejected proposals.
const MAX_PROPOSALS: usize = 100_000;
/// Extra corrections at `t = 0` when the certificate misses the tolerance.
const MAX_REFINEMENTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationStep {
    /// Path parameter reached by this step.
    pub t: f64,
    /// `||e^{-h} Phi(t) - I||_F` at acceptance.
    pub contraction: f64,
    /// Log-series terms summed for the correction.
    pub series_terms: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContinuationTrace {
    pub steps: Vec<ContinuationStep>,
    pub final_residual: f64,
    /// Rejected proposals (each halves the step).
    pub bisections: usize,
    /// Corrections applied at `t = 0` after the walk.
    pub refinements: usize,
}

/// A certified logarithm: `||e^B - A||_F <= residual_tol * max(1, ||A||_F)`.
#[derive(Debug, Clone)]
pub struct LogResult<T> {
    pub log: Matrix<T>,
    /// `||e^B - A||_F / max(1, ||A||_F)`.
    pub residual: f64,
    pub trace: ContinuationTrace,
}

/// `||e^B - A||_F / max(1, ||A||_F)`, the certificate every logarithm reports.
pub fn log_residual<T: Scalar>(log: &Matrix<T>, target: &Matrix<T>) -> Result<f64> {
    log.expect_dim(target.dim())?;
    let e = expm_with_tail(log, 1e-15)?;
    Ok(e.distance(target) / target.frobenius_norm().max(1.0))
}

/// Walks `path` from `t0` (where `e^{h0} = path(t0)`) down to `0`.
fn follow<T: Scalar>(
    path: impl Fn(f64) -> Matrix<T>,
    t0: f64,
    h0: Matrix<T>,
    first: ContinuationStep,
    tol: &Tolerance,
) -> Result<LogResult<T>> {
    let eta = tol.contraction_target;
    let mut trace = ContinuationTrace {
        steps: vec![first],
        ..Default::default()
    };
    let mut h = h0;
    let mut t = t0;
    let mut delta = t0 / 2.0;
    let mut proposals = 0usize;

    while t > 0.0 {
        let e = expm_with_tail(&h, tol.series_tail_tol)?;
        let lu = Lu::factor(&e).map_err(|_| {
            Error::NumericalFailure(format!("running exponential became singular at t = {t}"))
        })?;
        let here = Lu::factor(&path(t)).map_err(|_| {
            Error::NumericalFailure(format!("path became singular at t = {t}"))
        })?;
        loop {
            proposals += 1;
            if proposals > MAX_PROPOSALS {
                return Err(Error::NumericalFailure(format!(
                    "continuation exceeded {MAX_PROPOSALS} proposals at t = {t}"
                )));
            }
            let next = if delta >= t { 0.0 } else { t - delta };
            let target = path(next);
            let x = lu.solve(&target)?;
            let contraction = (&x - &Matrix::identity(x.dim())).frobenius_norm();
            let series = if contraction <= eta {
                log_series_terms(&here.solve(&target)?, tol.series_tail_tol).ok()
            } else {
                None
            };
            if let Some(series) = series {
                h = &h + &series.log;
                trace.steps.push(ContinuationStep {
                    t: next,
                    contraction,
                    series_terms: series.terms,
                });
                t = next;
                delta *= 2.0;
                break;
            }
            trace.bisections += 1;
            delta /= 2.0;
            if delta < t * f64::EPSILON {
                return Err(Error::NumericalFailure(format!(
                    "step size collapsed at t = {t} (contraction {contraction})"
                )));
            }
        }
    }

    let target = path(0.0);
    let mut residual = log_residual(&h, &target)?;
    while residual > tol.residual_tol && trace.refinements < MAX_REFINEMENTS {
        let e = expm_with_tail(&h, tol.series_tail_tol)?;
        let x = Lu::factor(&e)?.solve(&target)?;
        let Ok(series) = log_series_terms(&x, tol.series_tail_tol) else {
            break;
        };
        let candidate = &h + &series.log;
        let r = log_residual(&candidate, &target)?;
        trace.refinements += 1;
        if r >= residual {
            break;
        }
        h = candidate;
        residual = r;
    }
    trace.final_residual = residual;
    if !(residual <= tol.residual_tol) {
        return Err(Error::NumericalFailure(format!(
            "logarithm residual {residual:e} exceeds tolerance {:e}",
            tol.residual_tol
        )));
    }
    Ok(LogResult { log: h, residual, trace })
}

fn start_parameter<T: Scalar>(a: &Matrix<T>) -> f64 {
    2.0 * (a.frobenius_norm() + 1.0)
}

/// Starting logarithm at `t0`, doubling `t0` until the series contraction is
/// within `eta` as well.
fn start_at<T: Scalar>(
    mut t0: f64,
    tol: &Tolerance,
    make: impl Fn(f64) -> Result<SeriesLog<T>>,
) -> Result<(f64, SeriesLog<T>, ContinuationStep)> {
    loop {
        let start = make(t0)?;
        if start.contraction <= tol.contraction_target {
            let step = ContinuationStep {
                t: t0,
                contraction: start.contraction,
                series_terms: start.terms,
            };
            return Ok((t0, start, step));
        }
        t0 *= 2.0;
        if !t0.is_finite() {
            return Err(Error::NumericalFailure("no admissible start parameter".into()));
        }
    }
}

/// Logarithm of an invertible complex matrix along `Phi(t) = A - t e^{i theta} I`,
/// with `theta` chosen by [`select_ray`].
pub fn complex_path_log(a: &ComplexMatrix, tol: &Tolerance) -> Result<LogResult<Complex64>> {
    tol.validate()?;
    a.check_finite()?;
    Lu::factor(a)?;
    let ray = select_ray(&eigenvalues(a)?)?;
    complex_path_log_along(a, ray, tol)
}

/// [`complex_path_log`] along a caller-chosen ray.
pub fn complex_path_log_along(
    a: &ComplexMatrix,
    ray: ArcSpec,
    tol: &Tolerance,
) -> Result<LogResult<Complex64>> {
    tol.validate()?;
    let (t0, start, first) =
        start_at(start_parameter(a), tol, |t| shifted_exp_log_terms(a, ray.point(t), tol))?;
    follow(|t| a.add_diag(-ray.point(t)), t0, start.log, first, tol)
}

/// Real logarithm along `Phi(t) = A + t I`, valid when no eigenvalue lies on
/// `(-inf, 0]`.
pub fn real_ray_log(a: &RealMatrix, tol: &Tolerance) -> Result<LogResult<f64>> {
    tol.validate()?;
    a.check_finite()?;
    Lu::factor(a)?;
    if let Some(eigenvalue) = first_on_negative_axis(&real_sym_spectrum(a)?) {
        return Err(Error::SpectrumOnRay { eigenvalue });
    }
    // A + t I = t I - (-A)
    let minus_a = a.scale(-1.0);
    let (t0, start, first) =
        start_at(start_parameter(a), tol, |t| real_shift_log_terms(&minus_a, t, tol))?;
    follow(|t| a.add_diag(t), t0, start.log, first, tol)
}

/// Real logarithm of `x^2` along
/// `Phi(t) = (x - phi(t))(x - conj phi(t)) = x^2 - 2 Re(phi(t)) x + |phi(t)|^2 I`,
/// `phi(t) = t e^{i theta}` avoiding the real-symmetric spectrum of `x`.
pub fn real_square_log(x: &RealMatrix, tol: &Tolerance) -> Result<LogResult<f64>> {
    tol.validate()?;
    x.check_finite()?;
    let ray = select_ray(&real_sym_spectrum(x)?)?;
    Lu::factor(x)?;
    let sq = x * x;
    let cos = ray.angle().cos();
    let path = |t: f64| (&sq - &x.scale(2.0 * t * cos)).add_diag(t * t);

    // Phi(t) = t^2 I - (2 t cos(theta) x - x^2)
    let (t0, start, first) = start_at(2.0 * (x.frobenius_norm() + 1.0).powi(2), tol, |t| {
        real_shift_log_terms(&(&x.scale(2.0 * t * cos) - &sq), t * t, tol)
    })?;
    follow(path, t0, start.log, first, tol)
}

/// Real logarithm of `y^2`. A ray avoiding the spectrum of `y` squares to an
/// arc avoiding the spectrum of `y^2`, so this is [`real_square_log`] of `y`.
pub fn log_from_square(y: &RealMatrix, tol: &Tolerance) -> Result<LogResult<f64>> {
    real_square_log(y, tol)
}
