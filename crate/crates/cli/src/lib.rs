//! File formats and commands behind the `dodecatile` binary.
//!
//! Exit codes: 0 when the outcome matches the expected classification,
//! 1 for usage or I/O problems, 2 when a result contradicts it, 3 for
//! parameters that do not give a tile.

pub mod commands;
pub mod curves;
pub mod document;
pub mod mesh;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("{0}")]
    Unrealizable(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse(_) => 1,
            CliError::Inconsistent(_) => 2,
            CliError::Unrealizable(_) => 3,
        }
    }
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}
