use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot read config file {path}: {source}")]
    ConfigFile { path: PathBuf, source: std::io::Error },

    #[error("malformed config file {path}: {source}")]
    ConfigParse { path: PathBuf, source: serde_json::Error },

    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("numerical failure: {0}")]
    Numerical(#[from] chiralcav::Error),
}

impl CliError {
    /// 1 for bad input, 2 for failures during the computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::ConfigFile { .. } | CliError::ConfigParse { .. } => 1,
            CliError::Io { .. } | CliError::Numerical(_) => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
