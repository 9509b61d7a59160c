use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] syn2real::Error),

    #[error("group {group:?}: {source}")]
    InGroup {
        group: String,
        #[source]
        source: syn2real::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },

    /// A problem with one line of an input table (1-based).
    #[error("{path}:{line}: {message}")]
    Table { path: PathBuf, line: u64, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("serializing {what}: {message}")]
    Encode { what: String, message: String },
}

impl CliError {
    /// Stable error class printed ahead of the message.
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Core(e) | CliError::InGroup { source: e, .. } => e.class(),
            CliError::Io { .. } => "io",
            CliError::Config { .. } => "config",
            CliError::Table { .. } => "table",
            CliError::Usage(_) => "usage",
            CliError::Encode { .. } => "encode",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn table(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        CliError::Table {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
