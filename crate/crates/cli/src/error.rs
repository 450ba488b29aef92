use std::path::Path;

use dispersion_kernel::KernelError;
use thiserror::Error;

/// Failure categories of a CLI invocation, each with a fixed exit code so
/// scripts can tell a bad config from a numerical failure.
#[derive(Debug, Error)]
pub enum CliError {
    /// The run configuration (file, key, or environment knob) is invalid.
    #[error("config: {0}")]
    Config(String),
    /// A physics or quadrature operation failed at compute time.
    #[error("compute: {0}")]
    Compute(#[from] KernelError),
    /// Reading or writing a file failed.
    #[error("io: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
