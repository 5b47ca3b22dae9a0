use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// The variants are grouped the way the command line reports them: bad input,
/// exhausted resource guards, and internal inconsistencies.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
