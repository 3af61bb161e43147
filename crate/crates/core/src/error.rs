use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by environments, oracles and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid arm: {0}")]
    InvalidArm(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("oracle protocol violation: {0}")]
    Protocol(String),

    #[error("calibration error: {0}")]
    Calibration(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
