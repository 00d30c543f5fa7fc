use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} needs {requested}, over the budget of {budget}")]
    Budget {
        what: &'static str,
        requested: u128,
        budget: u128,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("density undefined: {0}")]
    UndefinedDensity(String),

    #[error("pattern contains a monotone path {0:?}")]
    MonotonePath([usize; 3]),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
