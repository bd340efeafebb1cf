use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// An input object does not satisfy the contract the operation relies on.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A duration search found no qualifying maximum.
    #[error("search failure: {0}")]
    SearchFailure(String),
    /// An experiment configuration was rejected.
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) | Error::Contract(_) | Error::Validation(_) => 2,
            Error::SearchFailure(_) => 3,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 4,
        }
    }
}
