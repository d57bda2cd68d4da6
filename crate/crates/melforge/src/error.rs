use std::path::PathBuf;

/// Failures surfaced by the command-line layer, each with an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] melforge_core::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("invalid input: {0}")]
    Input(String),
    /// A reproduction check did not hold.
    #[error("check failed: {0}")]
    Mismatch(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    /// 0 success, 1 failed check, 2 usage, 3 mathematical precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(melforge_core::Error::Usage(_)) => 2,
            CliError::Core(_) => 3,
            CliError::Read { .. } | CliError::Write { .. } | CliError::Json { .. } | CliError::Input(_) => 2,
            CliError::Mismatch(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
