use thiserror::Error;

/// Failures of a CLI run, each with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, configuration or parameter windows. Exit code 2.
    #[error("validation error: {0}")]
    Validation(String),

    /// Quadrature, recurrence or cross-check failures. Exit code 3.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<laguerre_cesaro::Error> for CliError {
    fn from(e: laguerre_cesaro::Error) -> Self {
        use laguerre_cesaro::Error as E;
        match e {
            E::InvalidParameter(_) | E::Domain { .. } | E::IndexOutOfRange { .. } => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
