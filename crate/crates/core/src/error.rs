use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The caller's configuration is inconsistent or cannot be honoured.
    #[error("configuration error: {0}")]
    Config(String),
    /// A numerical procedure could not reach the requested accuracy.
    /// `partial` carries the last iterate when one is meaningful.
    #[error("accuracy error: {message}")]
    Accuracy {
        message: String,
        partial: Option<Complex64>,
        estimate: Option<f64>,
    },
    /// An inequality that is expected to hold was found violated.
    #[error("bound violation: {0}")]
    BoundViolation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn accuracy(message: impl Into<String>, estimate: Option<f64>) -> Self {
        Error::Accuracy {
            message: message.into(),
            partial: None,
            estimate,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
