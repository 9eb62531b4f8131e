use thiserror::Error;

/// Errors raised by the Bingham model, samplers, and chains.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BinghamError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("Jacobi eigen-solver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("envelope bound violated: log f* = {log_target}, log M* + log g* = {log_bound}")]
    BoundViolation { log_target: f64, log_bound: f64 },

    #[error("rejection sampler exceeded {0} trials for a single draw")]
    TrialCapExceeded(u64),

    #[error("covariance matrix is singular (determinant {0:e})")]
    SingularCovariance(f64),

    #[error("unsupported dimension q = {0} for quadrature (only 2 and 3)")]
    UnsupportedDimension(usize),
}

impl BinghamError {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            BinghamError::NoConvergence { .. }
                | BinghamError::BoundViolation { .. }
                | BinghamError::TrialCapExceeded(_)
                | BinghamError::SingularCovariance(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, BinghamError>;
