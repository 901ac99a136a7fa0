use thiserror::Error;

use crate::votefile::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] kemeny_core::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 2 for bad input, 3 for size or time limits, 4 for internal faults.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Core(kemeny_core::Error::Input(_)) => 2,
            CliError::Core(kemeny_core::Error::Capability(_) | kemeny_core::Error::Timeout) => 3,
            CliError::Core(kemeny_core::Error::Internal(_)) | CliError::Internal(_) => 4,
        }
    }
}
