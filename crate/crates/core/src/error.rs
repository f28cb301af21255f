use thiserror::Error;

/// Failure modes shared by every operation in the crate.
///
/// `Domain` covers inputs outside an operation's precondition, `Resource`
/// covers configured caps (depth, bit size, sieve range) being exceeded.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource error: {0}")]
    Resource(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Domain(_) => 1,
            Error::Resource(_) => 2,
            Error::Verification(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
