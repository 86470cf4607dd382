use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The experiment description itself is unusable.
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    /// Well-formed input that violates an objective's requirements.
    #[error("{path}:{line}: {message}")]
    Contract { path: PathBuf, line: u64, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Run(#[from] blits::Error),
}

impl CliError {
    /// 2 for problems with the inputs, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Parse { .. } | CliError::Contract { .. } => 2,
            CliError::Io { .. } | CliError::Run(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
