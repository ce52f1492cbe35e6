use thiserror::Error;

/// Errors raised by the differentiation engine, the high-level operators,
/// the verification toolkit and the experiment runners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("expected a scalar-output program, found {0} outputs")]
    NonScalarOutput(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("fixed-point map is not a contraction at the solution (|dphi/dx| = {derivative})")]
    NotContraction { derivative: f64 },

    #[error("matrix is singular or ill-conditioned (pivot {pivot:e} below threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("state magnitude {magnitude:e} exceeded the blow-up limit at t = {time}")]
    BlowUp { time: f64, magnitude: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the caller's arguments rather than by the
    /// numerics of a run (non-convergence, singularity, blow-up).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. } | Error::NonScalarOutput(_) | Error::InvalidArgument(_)
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
