use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Numerical(thermocoll::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status: 2 for configuration problems, 3 for numerical aborts, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<thermocoll::Error> for CliError {
    fn from(e: thermocoll::Error) -> Self {
        use thermocoll::Error as E;
        match e {
            E::InvalidSpec(_) | E::UnmatchedAncilla { .. } | E::DimensionCap { .. } | E::DimensionMismatch(_) => {
                CliError::Config(e.to_string())
            }
            E::NotHermitian { .. } | E::NonFinite | E::InvalidDensityMatrix(_) | E::NumericalAbort { .. } => {
                CliError::Numerical(e)
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
