//! Eigenvalues, the real-symmetric spectrum, spectrum-avoiding rays and the
//! weak Schur reduction.

mod inverse;
mod qr;
mod ray;
mod schur;
mod spectrum;

pub use inverse::{inverse_iteration, EigenvectorEstimate};
pub use qr::hessenberg;
pub use ray::{angular_distance, check_ray_free, select_ray, ArcSpec};
pub(crate) use ray::first_on_negative_axis;
pub use schur::{weak_schur, WeakSchurForm};
pub use spectrum::{
    conjugate_pair_quadratic, eigenvalues, hausdorff, real_sym_spectrum, Spectrum, REAL_CLASSIFICATION,
};

use crate::matrix::ComplexMatrix;

/// Largest eigenpair backward error `||(A - lambda I) v||_2 / max(1, ||A||_F)`
/// over the spectrum, using inverse-iteration eigenvectors.
pub fn eigen_backward_error(a: &ComplexMatrix, spectrum: &Spectrum) -> f64 {
    let scale = a.frobenius_norm().max(1.0);
    spectrum
        .iter()
        .map(|&lambda| match inverse_iteration(a, lambda) {
            Ok(est) => est.residual / scale,
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}
