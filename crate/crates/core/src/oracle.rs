//! Reference computations that share no code path with the QR eigensolver
//! or the continuation logarithms. Used by the acceptance checks and tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lu::{inverse, Lu};
use crate::matrix::{ComplexMatrix, Matrix};

/// Monic characteristic polynomial `det(zI - A)` by Faddeev-LeVerrier.
///
/// Returns `[c0, c1, ..., c_{n-1}, 1]`, lowest degree first.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.dim();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n);
    for k in 1..=n {
        m = (a * &m).add_diag(coeffs[n - k + 1]);
        coeffs[n - k] = -(a * &m).trace() / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of a monic polynomial (lowest degree first) by Durand-Kerner
/// simultaneous iteration from points on a circle of Fujiwara radius,
/// polished by a few Newton steps.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let radius = (0..n)
        .map(|i| {
            let c = if i == 0 { coeffs[0] / 2.0 } else { coeffs[i] };
            c.norm().powf(1.0 / (n - i) as f64)
        })
        .fold(0.0, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();

    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let (p, _) = horner(coeffs, z[i]);
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    denom *= if d.norm() == 0.0 { Complex64::new(1e-300, 0.0) } else { d };
                }
            }
            let step = p / denom;
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved <= 1e-16 * radius {
            break;
        }
    }
    for zi in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let candidate = *zi - step;
            if step.is_finite() && horner(coeffs, candidate).0.norm() < p.norm() {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    z
}

/// Eigenvalues as roots of the characteristic polynomial of `A / ||A||_F`,
/// rescaled. Intended for small `n`; the coefficient route loses accuracy
/// quickly with dimension.
pub fn polynomial_eigenvalues(a: &ComplexMatrix) -> Vec<Complex64> {
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return vec![Complex64::new(0.0, 0.0); a.dim()];
    }
    let roots = durand_kerner(&characteristic_polynomial(&a.scale(1.0 / scale)));
    roots.into_iter().map(|z| z * scale).collect()
}

/// Unit null vector of `A - lambda I` by a regularized LU solve.
fn null_vector(a: &ComplexMatrix, lambda: Complex64) -> Vec<Complex64> {
    let n = a.dim();
    let shifted = a.add_diag(-lambda);
    let floor = n as f64 * f64::EPSILON * a.frobenius_norm().max(f64::MIN_POSITIVE);
    let lu = Lu::factor_regularized(&shifted, floor);
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0, 0.3 * i as f64).unscale(n as f64))
        .collect();
    for _ in 0..4 {
        let w = lu.solve_vec(&v);
        let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v = w.into_iter().map(|x| x / norm).collect();
    }
    v
}

/// `V diag(log lambda_i) V^{-1}` from polynomial-root eigenvalues and
/// null-vector eigenvectors. Requires a diagonalizable input with
/// well-separated eigenvalues.
pub fn eigendecomposition_log(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    let lambdas = polynomial_eigenvalues(a);
    if lambdas.iter().any(|l| l.norm() == 0.0) {
        return Err(Error::SingularSpectrum);
    }
    let mut v = ComplexMatrix::zeros(n);
    for (j, &l) in lambdas.iter().enumerate() {
        for (i, x) in null_vector(a, l).into_iter().enumerate() {
            v[(i, j)] = x;
        }
    }
    let d = Matrix::from_diag(&lambdas.iter().map(|l| l.ln()).collect::<Vec<_>>());
    Ok(&(&v * &d) * &inverse(&v)?)
}
