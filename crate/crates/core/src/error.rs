use thiserror::Error;

/// Errors raised by the toolkit.
///
/// The variants map one-to-one onto the CLI's nonzero exit codes, so new
/// failure modes should pick the closest existing category.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller supplied data that violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative method did not converge within its cap.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A special function was asked for parameters outside the range it supports.
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
