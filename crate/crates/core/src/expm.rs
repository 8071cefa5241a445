//! Matrix exponential by scaling and squaring with a truncated Taylor series.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Scaled norm the Taylor series is evaluated at.
const SCALED_NORM: f64 = 0.5;

/// Tail of `sum_{k > terms} r^k / k!` together with the number of terms kept.
fn taylor_terms(r: f64, tail_tol: f64) -> usize {
    let mut term = 1.0; // r^N / N!
    let mut n = 0usize;
    loop {
        let next = term * r / (n + 1) as f64;
        let ratio = r / (n + 2) as f64;
        let tail = if ratio < 1.0 { next / (1.0 - ratio) } else { f64::INFINITY };
        if tail < tail_tol || next == 0.0 {
            return n;
        }
        term = next;
        n += 1;
    }
}

/// `e^A` with the default series tail bound of `1e-15`.
pub fn expm<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    expm_with_tail(a, 1e-15)
}

/// `e^A`: scale by `2^s` so the scaled Frobenius norm is at most 0.5, sum the
/// Taylor series until the a-priori tail is below `tail_tol`, square `s` times.
pub fn expm_with_tail<T: Scalar>(a: &Matrix<T>, tail_tol: f64) -> Result<Matrix<T>> {
    a.check_finite()?;
    let n = a.dim();
    let norm = a.frobenius_norm();
    if norm == 0.0 {
        return Ok(Matrix::identity(n));
    }
    let mut squarings = 0i32;
    while norm / 2f64.powi(squarings) > SCALED_NORM {
        squarings += 1;
    }
    let x = a.scale(2f64.powi(-squarings));
    let r = norm / 2f64.powi(squarings);
    let terms = taylor_terms(r, tail_tol);

    // Horner: I + X(I + X/2(I + X/3(...)))
    let mut acc = Matrix::identity(n);
    for k in (1..=terms).rev() {
        acc = (&x * &acc).scale(1.0 / k as f64).add_diag(T::one());
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
        if !acc.is_finite() {
            return Err(Error::NumericalFailure("matrix exponential overflowed".into()));
        }
    }
    if !acc.is_finite() {
        return Err(Error::NumericalFailure("matrix exponential overflowed".into()));
    }
    Ok(acc)
}
