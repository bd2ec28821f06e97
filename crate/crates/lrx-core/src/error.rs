use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed state, permutation, or serialized input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Inconsistent or unsupported configuration.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    /// The requested computation does not fit the configured budget.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Input is degenerate for the requested statistic (constant data, single layer, ...).
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Resource exhaustion is reported separately from logic errors by the CLI.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
