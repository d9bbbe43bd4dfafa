use std::path::PathBuf;

use meltdown_core::reaction::ReactionError;
use meltdown_core::scan::ScanError;
use thiserror::Error;

use crate::config::ConfigErrors;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Config(#[from] ConfigErrors),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Ingest { path: PathBuf, line: u64, message: String },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{context}: {source}")]
    Reaction {
        context: String,
        #[source]
        source: ReactionError,
    },
    #[error("scan failed at {0}")]
    Scan(#[from] ScanError),
    #[error("provenance mismatch for {path}: recorded {recorded}, found {found}")]
    Provenance { path: String, recorded: String, found: String },
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl LabError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }

    /// Input the user can fix (configuration, input files) as opposed to a
    /// failure while running.
    pub fn is_validation(&self) -> bool {
        matches!(self, LabError::Config(_) | LabError::Ingest { .. } | LabError::Format { .. })
    }

    /// Process exit status: 1 for validation errors, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        if self.is_validation() {
            1
        } else {
            2
        }
    }
}
