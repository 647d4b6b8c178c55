use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("{step}: not positive definite (min eigenvalue {min_eig:.3e}, max eigenvalue {max_eig:.3e})")]
    NotPositiveDefinite { step: String, min_eig: f64, max_eig: f64 },

    #[error("matrix is singular (smallest/largest singular value ratio {0:.3e})")]
    Singular(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    EigenNonConvergence { sweeps: usize, off_norm: f64 },

    #[error("optimizer did not converge after {iterations} iterations (gradient norm {grad_norm:.3e}, best value {best_value})")]
    NonConvergence {
        iterations: usize,
        grad_norm: f64,
        best_value: f64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("unitary completion failed: {0}")]
    CompletionFailure(String),

    #[error("channel image is not faithful: {0}")]
    ImageNotFaithful(String),

    #[error("degenerate pair-equation coefficients (a1*b2 - a2*b1 = {0:.3e})")]
    DegenerateCoefficients(f64),

    #[error("codec error: {0}")]
    Codec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    /// Re-labels a positive-definiteness failure with the step that produced it.
    pub(crate) fn at_step(self, step: &str) -> Self {
        match self {
            Error::NotPositiveDefinite { min_eig, max_eig, .. } => Error::NotPositiveDefinite {
                step: step.to_string(),
                min_eig,
                max_eig,
            },
            other => other,
        }
    }
}
