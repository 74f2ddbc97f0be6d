use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A sampling grid or step size is too coarse for the requested accuracy.
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("no unique steady state: {0}")]
    NoSteadyState(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
