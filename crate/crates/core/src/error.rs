use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("unsupported cavity mode {mode}: {reason}")]
    UnsupportedMode { mode: String, reason: String },

    #[error("fit failed: {0}")]
    FitFailure(String),

    #[error("insufficient statistics: {0}")]
    InsufficientStatistics(String),

    #[error("trace has zero probability under the model at bin {bin}")]
    ImpossibleTrace { bin: usize },

    #[error("{path}:{line}: {message}")]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
