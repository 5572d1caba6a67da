use thiserror::Error;

/// Failures surfaced by the numerical pipeline.
///
/// `Validation` covers bad inputs caught before any heavy computation,
/// `Numerical` covers breakdowns during it (defective eigenbases,
/// overflowing exponentials), and `Range` covers the explicit overflow
/// guards on exponentials and state norms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("range error: {0}")]
    Range(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
