use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("operator is not a contraction (norm {norm})")]
    NotContraction { norm: f64 },
    #[error("operator is not symmetric (residual {residual:e})")]
    NotSymmetric { residual: f64 },
    #[error("operator is not positive (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("inconsistent factorization (residual {residual:e})")]
    InconsistentFactorization { residual: f64 },
    #[error("I + T is not injective on the domain (smallest singular value {sigma_min:e})")]
    NotInjective { sigma_min: f64 },
    #[error("matrix does not extend the partial operator (residual {residual:e})")]
    NotExtension { residual: f64 },
    #[error("independent order checks disagree: {0}")]
    CrossCheck(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// Stable machine-readable name of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            Error::NonFinite => "finite",
            Error::NotSquare { .. } => "square",
            Error::DimensionMismatch { .. } => "dimension",
            Error::NotOrthonormal { .. } => "orthonormal",
            Error::NotHermitian { .. } => "hermitian",
            Error::NotPsd { .. } => "psd",
            Error::NotContraction { .. } => "contraction",
            Error::NotSymmetric { .. } => "symmetric",
            Error::NotPositive { .. } => "positive",
            Error::InconsistentFactorization { .. } => "consistent_factorization",
            Error::NotInjective { .. } => "injective",
            Error::NotExtension { .. } => "extends_operator",
            Error::CrossCheck(_) => "cross_check",
            Error::Precondition(_) => "precondition",
        }
    }

    /// The residual or offending value that triggered the error, if any.
    pub fn residual(&self) -> Option<f64> {
        match *self {
            Error::NotOrthonormal { residual }
            | Error::NotHermitian { residual }
            | Error::NotSymmetric { residual }
            | Error::InconsistentFactorization { residual }
            | Error::NotExtension { residual } => Some(residual),
            Error::NotPsd { min_eigenvalue } | Error::NotPositive { min_eigenvalue } => Some(min_eigenvalue),
            Error::NotContraction { norm } => Some(norm),
            Error::NotInjective { sigma_min } => Some(sigma_min),
            _ => None,
        }
    }

    /// True for failures of an internal self-check rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::CrossCheck(_))
    }
}
