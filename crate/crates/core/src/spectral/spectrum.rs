use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::{ComplexMatrix, Matrix, RealMatrix};
use crate::scalar::Scalar;
use crate::spectral::qr::qr_eigenvalues;

/// Relative threshold (against `||M||_F`) below which an imaginary part counts as zero.
pub const REAL_CLASSIFICATION: f64 = 1e-9;

/// Eigenvalues with algebraic multiplicity, sorted by `(re, im)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<Complex64>) -> Self {
        eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Spectrum { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.eigenvalues.iter()
    }

    pub fn max_modulus(&self) -> f64 {
        self.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn min_modulus(&self) -> f64 {
        self.iter().fold(f64::INFINITY, |m, z| m.min(z.norm()))
    }

    /// Multiset of complex conjugates, re-sorted.
    pub fn conjugate(&self) -> Spectrum {
        Spectrum::new(self.iter().map(|z| z.conj()).collect())
    }

    /// Symmetric Hausdorff distance between two spectra viewed as point sets.
    pub fn hausdorff(&self, other: &Spectrum) -> f64 {
        hausdorff(&self.eigenvalues, &other.eigenvalues)
    }
}

pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let directed = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Spectrum of a complex matrix via Hessenberg reduction and shifted QR.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Spectrum> {
    Ok(Spectrum::new(qr_eigenvalues(a)?))
}

/// Real-symmetric spectrum of a real matrix.
///
/// For matrices this is the complex eigenvalue set; the conjugation symmetry
/// is enforced exactly by snapping near-real values onto the axis and
/// averaging conjugate partners.
pub fn real_sym_spectrum(x: &RealMatrix) -> Result<Spectrum> {
    let raw = qr_eigenvalues(&x.to_complex())?;
    Ok(Spectrum::new(pair_conjugates(raw, REAL_CLASSIFICATION * x.frobenius_norm())))
}

pub(crate) fn pair_conjugates(raw: Vec<Complex64>, real_tol: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in raw {
        if z.im.abs() <= real_tol {
            out.push(Complex64::new(z.re, 0.0));
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    // greedy nearest-partner matching, largest imaginary parts first
    upper.sort_by(|a, b| b.im.total_cmp(&a.im));
    for u in upper {
        let best = lower
            .iter()
            .enumerate()
            .map(|(i, l)| (i, (u - l.conj()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, _)) => {
                let l = lower.swap_remove(i);
                let z = (u + l.conj()) * 0.5;
                out.push(z);
                out.push(z.conj());
            }
            None => out.push(Complex64::new(u.re, 0.0)),
        }
    }
    out.extend(lower.into_iter().map(|l| Complex64::new(l.re, 0.0)));
    out
}

/// `x^2 - 2 Re(lambda) x + |lambda|^2 I`: real, and singular exactly when
/// `lambda` belongs to the real-symmetric spectrum of `x`.
pub fn conjugate_pair_quadratic<T: Scalar>(x: &Matrix<T>, lambda: Complex64) -> Matrix<T> {
    let sq = x * x;
    (&sq - &x.scale(2.0 * lambda.re)).add_diag(T::from_real(lambda.norm_sqr()))
}
