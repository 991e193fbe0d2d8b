use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerical(#[from] chiral_cqed::Error),

    #[error("{context}: {source}")]
    NumericalAt {
        context: String,
        source: chiral_cqed::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Schema(String),

    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 usage, 2 numerical failure, 3 validation failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Schema(_) => 1,
            CliError::Numerical(_) | CliError::NumericalAt { .. } => 2,
            CliError::Validation(_) => 3,
        }
    }
}

/// Attaches the sweep point to a solver error.
pub trait AtPoint<T> {
    fn at(self, context: impl FnOnce() -> String) -> Result<T>;
}

impl<T> AtPoint<T> for chiral_cqed::Result<T> {
    fn at(self, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| CliError::NumericalAt {
            context: context(),
            source,
        })
    }
}
