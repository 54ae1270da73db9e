use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("configuration: {0}")]
    Config(String),

    #[error("manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{row}:{column}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{stage}: {source}")]
    Core {
        stage: String,
        #[source]
        source: acsl_core::Error,
    },

    #[error("solver stopped after {iterations} iterations without reaching the tolerance")]
    NotConverged { iterations: usize },
}

pub type Result<T> = std::result::Result<T, AppError>;

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn core(stage: impl Into<String>) -> impl FnOnce(acsl_core::Error) -> Self {
        let stage = stage.into();
        move |source| Self::Core { stage, source }
    }

    /// Process exit status: 2 for bad input, 3 for numeric failure, 4 for
    /// non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Manifest { .. } | Self::Io { .. } | Self::Parse { .. } => 2,
            Self::Core { source, .. } => match source {
                acsl_core::Error::Config(_) | acsl_core::Error::Dimension(_) => 2,
                acsl_core::Error::NonFinite(_)
                | acsl_core::Error::Singular { .. }
                | acsl_core::Error::Invariant(_) => 3,
            },
            Self::NotConverged { .. } => 4,
        }
    }
}
