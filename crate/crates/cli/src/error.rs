use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: ConfigError,
    },

    #[error("OMM_WORKERS must be a positive integer, got `{0}`")]
    Workers(String),

    #[error(transparent)]
    Core(#[from] omm_core::Error),

    /// The report was produced but the system has no steady state.
    #[error("{0}")]
    Physics(String),
}

impl CliError {
    /// 1 for usage, parse and I/O problems, 2 for physics-level failures.
    pub fn exit_code(&self) -> u8 {
        use omm_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Config { .. } | CliError::Workers(_) => 1,
            CliError::Physics(_) => 2,
            CliError::Core(e) => match e {
                E::Io { .. }
                | E::TableParse { .. }
                | E::InvalidInput(_)
                | E::UnknownPreset(_)
                | E::UnknownParameter(_) => 1,
                _ => 2,
            },
        }
    }
}
