use thiserror::Error;

/// Errors produced by the library.
///
/// `Domain` covers inputs outside an operation's stated precondition;
/// `Numerical` covers evaluation failures (non-convergence, overflow of a
/// representable quantity). The CLI maps these to exit codes 2 and 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
