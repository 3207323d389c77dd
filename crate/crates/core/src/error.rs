use thiserror::Error;

/// Errors raised by the analysis and simulation pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain size mismatch: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },

    #[error("invalid transformation: {0}")]
    InvalidTransformation(String),

    #[error("invalid tuple: {0}")]
    InvalidTuple(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("semigroup closure exceeded the element cap of {cap}")]
    ClosureCap { cap: usize },

    /// An internal invariant failed. Signals a bug or an input outside the theory's assumptions.
    #[error("structural inconsistency: {0}")]
    Structural(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("classification failed: {0}")]
    Classification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}
