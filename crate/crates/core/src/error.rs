use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} is not positive definite even with jitter {jitter:e}")]
    NotPositiveDefinite { what: &'static str, jitter: f64 },

    #[error("no hyperparameter restart produced a finite log marginal likelihood")]
    NoFiniteLikelihood,

    #[error("not enough data: need at least {needed} observations, have {have}")]
    InsufficientData { needed: usize, have: usize },

    #[error("point {point:?} lies outside the domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("invalid {name}: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),

    #[error("optimum reference {f_star} is below observed true value {observed}")]
    InconsistentOptimum { f_star: f64, observed: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
