use thiserror::Error;

use crate::scalar::ComplexScalar;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix shape: {0}")]
    InvalidShape(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is singular (pivot {pivot:e} below threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("log series requires ||I - F|| < 1, got {norm}")]
    NotContractive { norm: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("zero lies in the spectrum; no logarithm exists")]
    SingularSpectrum,

    #[error("eigenvalue {eigenvalue} lies on the closed negative real axis")]
    SpectrumOnRay { eigenvalue: ComplexScalar },

    #[error("determinant must be positive, got sign {sign}")]
    NonPositiveDeterminant { sign: i8 },

    #[error("determinant must be negative, got sign {sign}")]
    NonNegativeDeterminant { sign: i8 },

    #[error("odd number of negative real eigenvalues ({count}) despite positive determinant")]
    ParityViolation { count: usize },

    #[error("sign matrix needs an even number of flipped coordinates, got {count}")]
    OddParity { count: usize },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    /// Stable identifier reported by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidShape(_) => "InvalidShape",
            Error::NonFinite { .. } => "NonFinite",
            Error::Singular { .. } => "Singular",
            Error::NotContractive { .. } => "NotContractive",
            Error::Precondition(_) => "Precondition",
            Error::SingularSpectrum => "SingularSpectrum",
            Error::SpectrumOnRay { .. } => "SpectrumOnRay",
            Error::NonPositiveDeterminant { .. } => "NonPositiveDeterminant",
            Error::NonNegativeDeterminant { .. } => "NonNegativeDeterminant",
            Error::ParityViolation { .. } => "ParityViolation",
            Error::OddParity { .. } => "OddParity",
            Error::InvalidTolerance(_) => "InvalidTolerance",
            Error::NumericalFailure(_) => "NumericalFailure",
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Singular { .. }
            | Error::SingularSpectrum
            | Error::SpectrumOnRay { .. }
            | Error::NonPositiveDeterminant { .. }
            | Error::NonNegativeDeterminant { .. } => ErrorKind::Domain,
            Error::DimensionMismatch { .. }
            | Error::InvalidShape(_)
            | Error::NonFinite { .. }
            | Error::Precondition(_)
            | Error::InvalidTolerance(_) => ErrorKind::Input,
            Error::NotContractive { .. }
            | Error::ParityViolation { .. }
            | Error::OddParity { .. }
            | Error::NumericalFailure(_) => ErrorKind::Numerical,
        }
    }
}

/// Coarse outcome classes; the CLI maps each to one exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// The input is outside the mathematical domain of the operation.
    Domain,
    /// Malformed input or arguments.
    Input,
    /// The algorithm failed to certify its result.
    Numerical,
}
