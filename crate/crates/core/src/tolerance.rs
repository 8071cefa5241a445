use crate::error::{Error, Result};

/// Numerical thresholds shared by every certified operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Bound on the relative residual `||e^B - A||_F / max(1, ||A||_F)`.
    pub residual_tol: f64,
    /// A-priori bound on the truncated tail of every power series.
    pub series_tail_tol: f64,
    /// Largest accepted `||e^{-h} Phi(t') - I||_F` during continuation.
    pub contraction_target: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            residual_tol: 1e-10,
            series_tail_tol: 1e-15,
            contraction_target: 0.5,
        }
    }
}

impl Tolerance {
    pub fn with_residual(mut self, residual_tol: f64) -> Self {
        self.residual_tol = residual_tol;
        self
    }

    pub fn with_contraction(mut self, eta: f64) -> Self {
        self.contraction_target = eta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.residual_tol >= 0.0 && self.residual_tol.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "residual_tol must be a finite nonnegative number, got {}",
                self.residual_tol
            )));
        }
        if !(self.series_tail_tol > 0.0 && self.series_tail_tol.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "series_tail_tol must be positive, got {}",
                self.series_tail_tol
            )));
        }
        if !(self.contraction_target > 0.0 && self.contraction_target < 1.0) {
            return Err(Error::InvalidTolerance(format!(
                "contraction target must lie in (0, 1), got {}",
                self.contraction_target
            )));
        }
        Ok(())
    }
}
