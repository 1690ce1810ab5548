//! CLI error split: usage mistakes exit 1, data/model problems exit 2.

use std::fmt;
use std::path::Path;

/// Everything a command can fail with, already rendered for the user.
#[derive(Debug)]
pub enum CliError {
    /// The invocation or configuration is malformed; exit code 1.
    Usage(String),
    /// Input data or model files are unusable; exit code 2.
    Data(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) => f.write_str(msg),
        }
    }
}

impl From<gaitmap_core::Error> for CliError {
    fn from(e: gaitmap_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Wraps an I/O failure with the path it concerns.
pub fn io_data(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}
