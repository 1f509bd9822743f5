use std::path::PathBuf;

use oisl::OislError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid parameter: {0}")]
    Model(OislError),
    #[error("numerical failure: {0}")]
    Numerical(OislError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{failed} of {total} checks failed")]
    Validation { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 1,
            CliError::Config(_) | CliError::Model(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<OislError> for CliError {
    fn from(e: OislError) -> Self {
        match e {
            OislError::NumericalFailure { .. } | OislError::EmptySample => CliError::Numerical(e),
            _ => CliError::Model(e),
        }
    }
}
