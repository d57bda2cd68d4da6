use alloc::string::String;

/// Errors raised across the crate.
///
/// `Usage` covers malformed input and API misuse; `Precondition` covers
/// inputs that are well formed but fail a mathematical hypothesis (a
/// non-polynomial reduction, a degenerate fold, an identically vanishing
/// spectrum). `Numeric` is reserved for integrator failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
