//! Experiment runner and reporting: algorithm x function x budget grids,
//! CSV/JSON results, IAR and w/t/l summaries, SVG convergence plots.

pub mod config;
pub mod metrics;
pub mod report;
pub mod runner;
pub mod svg;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{Algorithm, ExperimentConfig};
pub use metrics::{compute_iar, densify, tally_wtl, Iar, Wtl};
pub use report::{derive_report, ExperimentReport, Summary};
pub use runner::{run_grid, RunResult, RunRow};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config { line: Option<usize>, msg: String },

    #[error("budget misconfiguration: {0}")]
    Budget(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed data: {msg}")]
    Data { path: PathBuf, msg: String },

    #[error(transparent)]
    Optimizer(#[from] crate::error::Error),
}

impl HarnessError {
    pub(crate) fn config(line: usize, msg: impl Into<String>) -> Self {
        HarnessError::Config {
            line: Some(line),
            msg: msg.into(),
        }
    }

    pub(crate) fn config_msg(msg: impl Into<String>) -> Self {
        HarnessError::Config {
            line: None,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn data(path: &Path, msg: impl ToString) -> Self {
        HarnessError::Data {
            path: path.to_path_buf(),
            msg: msg.to_string(),
        }
    }

    /// Process exit code for the CLI: 2 for config errors, 3 for budget
    /// misconfiguration, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config { .. } => 2,
            HarnessError::Budget(_) => 3,
            HarnessError::Optimizer(crate::error::Error::InsufficientBudget { .. }) => 3,
            _ => 1,
        }
    }
}
