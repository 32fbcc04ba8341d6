//! File formats, instance generators and the seeded experiment runner.
//!
//! Everything here is tooling. The experiment runner computes exact minimum
//! cuts to measure error, so its reports are not private.

pub mod config;
pub mod experiment;
pub mod generators;
pub mod io;

use std::path::PathBuf;

pub use config::{constants_with_overrides, ExperimentConfig, InstanceSource, Mode, CONSTANT_ENV_VARS};
pub use experiment::{csv_string, run_experiment, write_csv, EpsSummary, ExperimentReport, ReportRow, Summary, CSV_HEADER};
pub use generators::{generate, Generator};
pub use io::{load_graph, load_tree, parse_graph, parse_tree, save_graph, save_tree, write_graph, write_tree};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] crate::Error),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// True for [`crate::Error::Aborted`].
    pub fn is_abort(&self) -> bool {
        matches!(self, Self::Core(crate::Error::Aborted { .. }))
    }
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;
