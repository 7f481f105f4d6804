use thiserror::Error;

/// Errors raised by the transducer model and the sweep engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A channel quantity was requested on the wrong side of the RDP boundary.
    #[error("wrong channel branch: {0}")]
    WrongBranch(String),

    /// A linear system could not be solved.
    #[error("singular system: {0}")]
    Singular(String),

    /// Inconsistent input, e.g. a descriptor whose fields disagree with its kind.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A recomputed invariant failed on an emitted result.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// Invalid sweep configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Writing output failed.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
