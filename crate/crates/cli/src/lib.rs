//! Batch runner for `ucayley`: a JSON job names a ring, a unit subgroup and a
//! connection set, and the runner writes one report file per analysis.

pub mod config;
pub mod gallery;
pub mod report;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{Analysis, JobConfig};
pub use report::{run, RunSummary};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("i/o error on {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::CapExceeded(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}
