use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T> = std::result::Result<T, PipelineError>;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qagait_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {msg}", path.display())]
    Image { path: PathBuf, msg: String },
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error("{0}")]
    Empty(String),
}

impl PipelineError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    /// Process exit status: 1 usage or configuration, 2 I/O, 3 empty result.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Core(_) => 1,
            Self::Io { .. } | Self::Image { .. } | Self::Manifest { .. } => 2,
            Self::Empty(_) => 3,
        }
    }
}
