//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by sieving, counting, and saddle-point evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The request exceeds a configured memory or size cap.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// An iteration failed to converge or produced a non-finite value.
    #[error("numeric failure: {0}")]
    NumericFailure(String),

    /// A membership table does not cover the range an evaluation needs.
    #[error("membership table too small: need limit >= {needed}, have {available}")]
    TableTooSmall { needed: u64, available: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI: 2 usage, 3 resource cap,
    /// 4 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Io(_) => 2,
            Error::ResourceLimit(_) | Error::TableTooSmall { .. } => 3,
            Error::NumericFailure(_) => 4,
        }
    }
}
