//! Exponential factorizations of real invertible matrices.
//!
//! A real matrix with positive determinant need not be an exponential, but
//! it is always a product of two: deflate its real eigenvalues with an
//! orthogonal `Q` (negative ones first), flip the rows of the negative ones
//! with a sign matrix `P` so that `P Q^T M Q` has no spectrum on `(-inf, 0]`,
//! and take logarithms of both `P` (rotation blocks) and `P Q^T M Q`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::continuation::{complex_path_log, log_residual, real_ray_log, real_square_log, LogResult};
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::lu::{determinant_sign, Lu};
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::spectral::weak_schur;
use crate::tolerance::Tolerance;

/// `diag(-1, ..., -1, 1, ..., 1)` with an even number `k` of leading `-1`s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignMatrix {
    k: usize,
    n: usize,
}

impl SignMatrix {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::Precondition(format!("cannot flip {k} of {n} coordinates")));
        }
        if k % 2 == 1 {
            return Err(Error::OddParity { count: k });
        }
        Ok(SignMatrix { k, n })
    }

    pub fn flipped(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn to_matrix(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, |i, j| match (i == j, i < self.k) {
            (false, _) => 0.0,
            (true, true) => -1.0,
            (true, false) => 1.0,
        })
    }

    /// `P X`: negates the first `k` rows.
    pub fn apply_left(&self, x: &RealMatrix) -> RealMatrix {
        RealMatrix::from_fn(x.dim(), |i, j| if i < self.k { -x[(i, j)] } else { x[(i, j)] })
    }
}

/// Real logarithm of a sign matrix: one `[[0, -pi], [pi, 0]]` block per
/// pair of flipped coordinates, zero elsewhere.
pub fn sign_matrix_log(p: &SignMatrix) -> Result<RealMatrix> {
    if p.k % 2 == 1 {
        return Err(Error::OddParity { count: p.k });
    }
    let mut c = RealMatrix::zeros(p.n);
    for b in 0..p.k / 2 {
        c[(2 * b, 2 * b + 1)] = -PI;
        c[(2 * b + 1, 2 * b)] = PI;
    }
    Ok(c)
}

/// `I` or `diag(-1, 1, ..., 1)` in front of the two exponentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prefix {
    Identity,
    ITilde,
}

impl Prefix {
    pub fn apply_left(&self, x: &RealMatrix) -> RealMatrix {
        match self {
            Prefix::Identity => x.clone(),
            Prefix::ITilde => reflect_first_row(x),
        }
    }
}

fn reflect_first_row(x: &RealMatrix) -> RealMatrix {
    RealMatrix::from_fn(x.dim(), |i, j| if i == 0 { -x[(i, j)] } else { x[(i, j)] })
}

/// `M = prefix * e^{B1} * e^{B2}` with its residual certificate.
#[derive(Debug, Clone)]
pub struct TwoExpFactorization {
    pub b1: RealMatrix,
    pub b2: RealMatrix,
    pub prefix: Prefix,
    /// `||prefix e^{B1} e^{B2} - M||_F / ||M||_F`.
    pub residual: f64,
    /// Negative real eigenvalues flipped by the sign matrix.
    pub k_negative: usize,
    /// Orthogonal deflation; `B1 = Q C Q^T`, `B2 = Q B Q^T`.
    pub q: RealMatrix,
    /// Logarithm `C` of the sign matrix.
    pub sign_log: RealMatrix,
    /// Logarithm `B` of the sign-corrected deflated matrix.
    pub core_log: RealMatrix,
}

impl TwoExpFactorization {
    /// `prefix e^{B1} e^{B2}`.
    pub fn reconstruct(&self) -> Result<RealMatrix> {
        self.reconstruct_at(1.0)
    }

    /// `prefix e^{s B1} e^{s B2}`, the path from `prefix` to `M`.
    pub fn reconstruct_at(&self, s: f64) -> Result<RealMatrix> {
        let prod = &expm(&self.b1.scale(s))? * &expm(&self.b2.scale(s))?;
        Ok(self.prefix.apply_left(&prod))
    }

    /// `true` when the path `s -> prefix e^{s B1} e^{s B2}` is invertible at
    /// `samples` evenly spaced points of `[0, 1]` with constant determinant sign.
    pub fn component_path_invertible(&self, samples: usize) -> Result<bool> {
        let expected = match self.prefix {
            Prefix::Identity => 1,
            Prefix::ITilde => -1,
        };
        for i in 0..samples {
            let s = if samples > 1 { i as f64 / (samples - 1) as f64 } else { 1.0 };
            match determinant_sign(&self.reconstruct_at(s)?) {
                Ok(sign) if sign == expected => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}

fn relative_residual(f: &TwoExpFactorization, m: &RealMatrix) -> Result<f64> {
    Ok(f.reconstruct()?.distance(m) / m.frobenius_norm())
}

/// Two-exponential factorization of a real matrix with positive determinant.
pub fn two_exp_factor(m: &RealMatrix, tol: &Tolerance) -> Result<TwoExpFactorization> {
    tol.validate()?;
    m.check_finite()?;
    let n = m.dim();
    let sign = determinant_sign(m)?;
    if sign <= 0 {
        return Err(Error::NonPositiveDeterminant { sign });
    }

    let schur = weak_schur(m)?;
    let reals = schur.real_eigenvalues();
    let k_negative = reals.iter().take_while(|&&l| l < 0.0).count();
    if reals[k_negative..].iter().any(|&l| l < 0.0) {
        return Err(Error::NumericalFailure(
            "negative eigenvalues were not deflated first".into(),
        ));
    }
    if k_negative % 2 == 1 {
        return Err(Error::ParityViolation { count: k_negative });
    }

    let mut f = if k_negative == 0 {
        // already a real exponential
        let b = real_ray_log(m, tol)?;
        TwoExpFactorization {
            b1: RealMatrix::zeros(n),
            b2: b.log.clone(),
            prefix: Prefix::Identity,
            residual: f64::NAN,
            k_negative,
            q: RealMatrix::identity(n),
            sign_log: RealMatrix::zeros(n),
            core_log: b.log,
        }
    } else {
        let p = SignMatrix::new(k_negative, n)?;
        let corrected = p.apply_left(&schur.t);
        let b = real_ray_log(&corrected, tol)?.log;
        let c = sign_matrix_log(&p)?;
        let qt = schur.q.transpose();
        TwoExpFactorization {
            b1: &(&schur.q * &c) * &qt,
            b2: &(&schur.q * &b) * &qt,
            prefix: Prefix::Identity,
            residual: f64::NAN,
            k_negative,
            q: schur.q,
            sign_log: c,
            core_log: b,
        }
    };
    f.residual = relative_residual(&f, m)?;
    certify(f, tol)
}

fn certify(f: TwoExpFactorization, tol: &Tolerance) -> Result<TwoExpFactorization> {
    if !(f.residual <= tol.residual_tol) {
        return Err(Error::NumericalFailure(format!(
            "factorization residual {:e} exceeds tolerance {:e}",
            f.residual, tol.residual_tol
        )));
    }
    Ok(f)
}

/// `M = diag(-1, 1, ..., 1) e^{B1} e^{B2}` for a real matrix with negative determinant.
pub fn neg_det_factor(m: &RealMatrix, tol: &Tolerance) -> Result<TwoExpFactorization> {
    tol.validate()?;
    m.check_finite()?;
    let sign = determinant_sign(m)?;
    if sign >= 0 {
        return Err(Error::NonNegativeDeterminant { sign });
    }
    let mut f = two_exp_factor(&reflect_first_row(m), tol)?;
    f.prefix = Prefix::ITilde;
    f.residual = relative_residual(&f, m)?;
    certify(f, tol)
}

/// Dispatches to [`two_exp_factor`] or [`neg_det_factor`] by determinant sign.
pub fn factor(m: &RealMatrix, tol: &Tolerance) -> Result<TwoExpFactorization> {
    if determinant_sign(m)? > 0 {
        two_exp_factor(m, tol)
    } else {
        neg_det_factor(m, tol)
    }
}

/// Real logarithm of `blockdiag(A, A)` together with its square root
/// `S = [[C, -D], [D, C]]`, `C + iD = e^{H/2}` for a complex logarithm `H` of `A`.
#[derive(Debug, Clone)]
pub struct DoubledBlockLog {
    pub result: LogResult<f64>,
    pub c: RealMatrix,
    pub d: RealMatrix,
}

impl DoubledBlockLog {
    /// `||CD + DC||_F`.
    pub fn anticommutator_error(&self) -> f64 {
        (&(&self.c * &self.d) + &(&self.d * &self.c)).frobenius_norm()
    }

    /// `||C^2 - D^2 - A||_F`.
    pub fn square_error(&self, a: &RealMatrix) -> f64 {
        (&(&(&self.c * &self.c) - &(&self.d * &self.d)) - a).frobenius_norm()
    }

    pub fn square_root(&self) -> RealMatrix {
        RealMatrix::from_blocks(&self.c, &self.d.scale(-1.0), &self.d, &self.c)
            .expect("C and D share a dimension")
    }
}

/// Real logarithm of `blockdiag(A, A)` for any invertible real `A`.
pub fn doubled_block_log(a: &RealMatrix, tol: &Tolerance) -> Result<DoubledBlockLog> {
    tol.validate()?;
    a.check_finite()?;
    Lu::factor(a)?;
    let h = complex_path_log(&a.to_complex(), tol)?;
    let half: ComplexMatrix = expm(&h.log.scale(0.5))?;
    let c = half.re();
    let d = half.im();
    let s = RealMatrix::from_blocks(&c, &d.scale(-1.0), &d, &c)?;
    let mut result = real_square_log(&s, tol)?;
    let target = RealMatrix::block_diag(a, a);
    result.residual = log_residual(&result.log, &target)?;
    result.trace.final_residual = result.residual;
    if !(result.residual <= tol.residual_tol) {
        return Err(Error::NumericalFailure(format!(
            "doubled-block residual {:e} exceeds tolerance {:e}",
            result.residual, tol.residual_tol
        )));
    }
    Ok(DoubledBlockLog { result, c, d })
}

/// Connected component of the real invertible group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    GPlus,
    GMinus,
}

pub fn classify_component(m: &RealMatrix) -> Result<Component> {
    Ok(if determinant_sign(m)? > 0 {
        Component::GPlus
    } else {
        Component::GMinus
    })
}
