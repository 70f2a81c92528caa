use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}:{line}: {msg}")]
    Config { path: PathBuf, line: usize, msg: String },
    #[error("{path}: line {line}: {msg}")]
    Schema { path: PathBuf, line: u64, msg: String },
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("csv {0}: {1}")]
    Csv(PathBuf, #[source] csv::Error),
    #[error("invalid data: {0}")]
    Data(#[source] driftloc_core::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl From<driftloc_core::Error> for CliError {
    fn from(e: driftloc_core::Error) -> Self {
        use driftloc_core::Error as E;
        match e {
            E::InvalidParameter(msg) => CliError::Usage(format!("invalid parameter: {msg}")),
            E::NotATree | E::EmptyInput => CliError::Numerical(e.to_string()),
            _ => CliError::Data(e),
        }
    }
}

impl CliError {
    /// Process exit code: 2 usage/config, 3 data/schema, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 2,
            CliError::Schema { .. } | CliError::Io(..) | CliError::Csv(..) | CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}
