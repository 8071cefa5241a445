//! Inverse iteration for eigenvectors of known eigenvalues.

use crate::error::{Error, Result};
use crate::lu::Lu;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

const MAX_ITERATIONS: usize = 50;
const STAGNATION: f64 = 1e-6;

/// Unit eigenvector estimate for `shift` and its residual `||(A - shift I) v||_2`.
#[derive(Debug, Clone)]
pub struct EigenvectorEstimate<T> {
    pub vector: Vec<T>,
    pub residual: f64,
}

pub(crate) fn norm2<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.modulus_sq()).sum::<f64>().sqrt()
}

fn apply<T: Scalar>(a: &Matrix<T>, v: &[T]) -> Vec<T> {
    (0..a.dim())
        .map(|i| a.row(i).iter().zip(v).fold(T::zero(), |acc, (&x, &y)| acc + x * y))
        .collect()
}

/// Inverse iteration on `A - shift I` with a regularized LU, followed by two
/// refinement steps once the residual settles.
///
/// Fails when the residual still exceeds `1e-6 ||A||_F` after 50 iterations.
pub fn inverse_iteration<T: Scalar>(a: &Matrix<T>, shift: T) -> Result<EigenvectorEstimate<T>> {
    let n = a.dim();
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let shifted = a.add_diag(-shift);
    let lu = Lu::factor_regularized(&shifted, n as f64 * f64::EPSILON * scale);

    // irregular deterministic start keeps clear of structured eigenvectors
    let mut v: Vec<T> = (0..n)
        .map(|i| T::from_real(1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_7).fract()))
        .collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x = x.scale(1.0 / nv));

    let converged = 16.0 * n as f64 * f64::EPSILON * scale;
    let mut residual = f64::INFINITY;
    let mut refinements = 0;
    for _ in 0..MAX_ITERATIONS {
        let w = lu.solve_vec(&v);
        let nw = norm2(&w);
        if !(nw.is_finite() && nw > 0.0) {
            break;
        }
        v = w.into_iter().map(|x| x.scale(1.0 / nw)).collect();
        residual = norm2(&apply(&shifted, &v));
        if residual <= STAGNATION * scale {
            refinements += 1;
            if refinements > 2 || residual <= converged {
                break;
            }
        }
    }
    if !(residual <= STAGNATION * scale) {
        return Err(Error::NumericalFailure(format!(
            "inverse iteration stagnated at residual {residual:e}"
        )));
    }
    Ok(EigenvectorEstimate { vector: v, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RealMatrix;

    #[test]
    fn finds_symmetric_eigenvector() {
        let a = RealMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let est = inverse_iteration(&a, 3.0).unwrap();
        let s = 0.5f64.sqrt();
        assert!((est.vector[0].abs() - s).abs() < 1e-12);
        assert!((est.vector[1].abs() - s).abs() < 1e-12);
        assert!(est.residual < 1e-12);
    }

    #[test]
    fn repeated_eigenvalue_gives_some_eigenvector() {
        let a = RealMatrix::from_diag(&[5.0, 5.0, 1.0]);
        let est = inverse_iteration(&a, 5.0).unwrap();
        assert!(est.vector[2].abs() < 1e-10);
    }

    #[test]
    fn non_eigenvalue_stagnates() {
        let a = RealMatrix::from_diag(&[1.0, 2.0]);
        assert!(matches!(
            inverse_iteration(&a, 1.5),
            Err(Error::NumericalFailure(_))
        ));
    }
}
