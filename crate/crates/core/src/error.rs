use thiserror::Error;

/// Errors raised by geometry construction, code building and verification.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or incompatible input parameters.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An arithmetic operation outside its domain, such as inverting zero.
    #[error("domain error: {0}")]
    Domain(String),

    /// A desk-scale size cap would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The polar space has no polarity (parabolic quadric in even characteristic).
    #[error("unsupported polarity: {0}")]
    UnsupportedPolarity(String),

    /// A search over configurations came back empty.
    #[error("not found: {0}")]
    NotFound(String),

    /// A full weight scan was requested but the dual code is too large.
    #[error("scan refused: {0}")]
    ScanRefused(String),

    /// An internal cross-check failed. Always a bug.
    #[error("internal consistency error: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
