use std::path::PathBuf;

use composite_probe::ErrorClass;
use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_IO: u8 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: composite_probe::Error,
    },

    #[error("scenario: {0}")]
    Config(String),

    #[error("unknown figure '{id}' (available: {available})")]
    UnknownFigure { id: String, available: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core { source, .. } => match source.class() {
                ErrorClass::Validation => EXIT_VALIDATION,
                ErrorClass::Numerical => EXIT_NUMERICAL,
            },
            CliError::Config(_) | CliError::UnknownFigure { .. } => EXIT_VALIDATION,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

/// Attaches the scenario step that produced a library error.
pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T>;
}

impl<T> Context<T> for composite_probe::Result<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T> {
        self.map_err(|source| CliError::Core {
            context: what.into(),
            source,
        })
    }
}
