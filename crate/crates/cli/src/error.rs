use jordan_wlcp_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The input does not match the instance schema; `path` names the offending field.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Parse { path: path.into(), message: message.into() }
    }

    /// `2` for anything the caller got wrong, `1` for computations that failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Validation(_) | Self::Usage(_) | Self::Io { .. } => 2,
            Self::Core(CoreError::InvalidInput(_) | CoreError::Capacity { .. } | CoreError::Domain(_)) => 2,
            Self::Core(_) | Self::Generation(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
