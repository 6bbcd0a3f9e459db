use thiserror::Error;

use crate::mass::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A request would materialize more events than the configured cap allows.
    #[error("{what} for n = {n} exceeds the materialization cap of {cap}")]
    Capacity { what: &'static str, n: usize, cap: usize },

    #[error("invalid frame of discernment: {0}")]
    InvalidFrame(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("validation failed:\n{0}")]
    Validation(ValidationReport),

    /// A JSON document could not be turned into a model value.
    #[error("load error: {0}")]
    Load(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
