use thiserror::Error;

/// Errors produced by the library.
///
/// The variants line up with the exit-code classes of the command line
/// front end: bad input, a size or time limit, and broken internal
/// invariants (which indicate a bug rather than a bad instance).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("capability limit: {0}")]
    Capability(String),
    #[error("time limit exceeded")]
    Timeout,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
