//! Orthogonal deflation of the real eigenvalues of a real matrix.

use crate::error::Result;
use crate::matrix::RealMatrix;
use crate::spectral::inverse::{inverse_iteration, norm2};
use crate::spectral::qr::qr_eigenvalues;
use crate::spectral::spectrum::{pair_conjugates, REAL_CLASSIFICATION};

/// `Q^T M Q = T` with the first `k` columns of `T` upper triangular.
///
/// `T(i, i)` for `i < k` are the deflated real eigenvalues in ascending order
/// (negative ones first); the trailing `(n - k)` block carries the non-real
/// part of the spectrum.
#[derive(Debug, Clone)]
pub struct WeakSchurForm {
    pub q: RealMatrix,
    pub t: RealMatrix,
    pub k: usize,
}

impl WeakSchurForm {
    /// Deflated real eigenvalues, `T(0,0) ..= T(k-1,k-1)`.
    pub fn real_eigenvalues(&self) -> Vec<f64> {
        (0..self.k).map(|i| self.t[(i, i)]).collect()
    }

    /// `||Q^T Q - I||_F`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.q.dim();
        (&self.q.transpose() * &self.q).distance(&RealMatrix::identity(n))
    }

    /// `||Q^T M Q - T||_F`.
    pub fn similarity_error(&self, m: &RealMatrix) -> f64 {
        (&(&self.q.transpose() * m) * &self.q).distance(&self.t)
    }
}

/// Householder reflector `blockdiag(I_offset, I - 2 w w^T / w^T w)` mapping
/// the unit vector `v` (embedded at `offset`) to a multiple of `e_offset`.
fn embedded_reflector(n: usize, offset: usize, v: &[f64]) -> RealMatrix {
    let mut w = v.to_vec();
    let sign = if w[0] >= 0.0 { 1.0 } else { -1.0 };
    w[0] += sign * norm2(v);
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let mut g = RealMatrix::identity(n);
    if ww == 0.0 {
        return g;
    }
    for i in 0..w.len() {
        for j in 0..w.len() {
            g[(offset + i, offset + j)] -= 2.0 * w[i] * w[j] / ww;
        }
    }
    g
}

/// Weak Schur reduction: deflates every eigenvalue classified real
/// (`|Im| <= 1e-9 ||M||_F`), most negative first, through inverse-iteration
/// eigenvectors and Householder reflections.
pub fn weak_schur(m: &RealMatrix) -> Result<WeakSchurForm> {
    m.check_finite()?;
    let n = m.dim();
    let real_tol = REAL_CLASSIFICATION * m.frobenius_norm();
    let mut t = m.clone();
    let mut q = RealMatrix::identity(n);
    let mut k = 0;

    while k < n {
        let block = t.trailing(k);
        let lambda = if block.dim() == 1 {
            block[(0, 0)]
        } else {
            let spectrum = pair_conjugates(qr_eigenvalues(&block.to_complex())?, real_tol);
            match spectrum
                .iter()
                .filter(|z| z.im == 0.0)
                .map(|z| z.re)
                .min_by(f64::total_cmp)
            {
                Some(l) => l,
                None => break,
            }
        };
        if block.dim() > 1 {
            let est = inverse_iteration(&block, lambda)?;
            let g = embedded_reflector(n, k, &est.vector);
            t = &(&g * &t) * &g;
            q = &q * &g;
        }
        for i in k + 1..n {
            t[(i, k)] = 0.0;
        }
        k += 1;
    }
    Ok(WeakSchurForm { q, t, k })
}
