//! Library side of the `gcpoly` command-line tool: configuration, file
//! formats, synthetic fixtures and the verb implementations.

pub mod commands;
pub mod config;
pub mod fixtures;
pub mod geojson;
pub mod pgm;

/// CLI-level failure carrying the message for stderr; every variant maps
/// to exit code 2 (input error).
#[derive(Debug)]
pub enum CliError {
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}
