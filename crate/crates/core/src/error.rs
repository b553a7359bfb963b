use thiserror::Error;

/// Errors raised by the numerical operations of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value at node {index} ({point})")]
    NumericDomain { index: usize, point: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("integration failed at theta = {theta}: {reason}")]
    IntegrationFailure { theta: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
