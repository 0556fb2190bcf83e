//! Configuration files and error reporting for the `omm` binary.

pub mod config;
pub mod error;

pub use config::{parse_config, serialize_config, ConfigError};
pub use error::CliError;
