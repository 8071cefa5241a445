//! Dense matrix logarithms by path continuation, and exponential
//! factorizations of real invertible matrices.
//!
//! Every constructive result carries a residual certificate: logarithms
//! report `||e^B - A||_F / max(1, ||A||_F)`, factorizations report
//! `||prefix e^{B1} e^{B2} - M||_F / ||M||_F`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod acceptance;
pub mod continuation;
pub mod error;
pub mod expm;
pub mod factorization;
pub mod format;
pub mod lu;
pub mod matrix;
pub mod oracle;
pub mod scalar;
pub mod series;
pub mod spectral;
pub mod tolerance;

pub use continuation::{
    complex_path_log, log_from_square, log_residual, real_ray_log, real_square_log,
    ContinuationStep, ContinuationTrace, LogResult,
};
pub use error::{Error, ErrorKind, Result};
pub use expm::expm;
pub use factorization::{
    classify_component, doubled_block_log, factor, neg_det_factor, sign_matrix_log, two_exp_factor,
    Component, DoubledBlockLog, Prefix, SignMatrix, TwoExpFactorization,
};
pub use lu::{determinant_sign, solve_lu};
pub use matrix::{matmul, op_norm_bound, ComplexMatrix, Matrix, RealMatrix};
pub use scalar::{ComplexScalar, Scalar};
pub use series::{log_series, shifted_exp_log};
pub use spectral::{
    check_ray_free, eigenvalues, real_sym_spectrum, select_ray, weak_schur, ArcSpec, Spectrum,
    WeakSchurForm,
};
pub use tolerance::Tolerance;
