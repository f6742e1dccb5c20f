use alloc::string::String;

use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A spectral function was evaluated outside its domain (e.g. the square
    /// root of an element with a clearly negative eigenvalue).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric failure after {iterations} iterations: {reason}")]
    NumericFailure { reason: String, iterations: usize },

    #[error("problem size {n} exceeds the supported maximum {max}")]
    Capacity { n: usize, max: usize },

    #[error("pair stayed degenerate after {retries} resamples")]
    DegeneratePair { retries: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
