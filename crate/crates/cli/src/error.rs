use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] implicit_dd::Error),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    ProblemFile {
        path: PathBuf,
        source: toml::de::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 1 for bad input, 2 for singular configurations, 3 for solver failures,
    /// 4 for failed verification.
    pub fn exit_code(&self) -> i32 {
        use implicit_dd::Error as E;
        match self {
            CliError::Core(E::Singular { .. } | E::CoincidentY { .. }) => 2,
            CliError::Core(E::Unsolvable { .. }) => 3,
            CliError::Verification(_) => 4,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
