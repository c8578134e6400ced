use std::path::Path;

use ahext_core::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ahext_core::Error),

    #[error("{0}")]
    Schema(String),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("not certified: {0}")]
    NotCertified(String),
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
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Hypothesis => 3,
                ErrorKind::Numerical => 4,
            },
            CliError::Schema(_) | CliError::Io { .. } => 2,
            CliError::NotCertified(_) => 4,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Schema(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(format!("json: {e}"))
    }
}
