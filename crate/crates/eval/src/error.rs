use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = EvalError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum EvalError {
    /// Bad flags, config keys, or an incompatible model/distance pairing.
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Surprise(#[from] surprise_core::Error),
    #[error("{0}")]
    Data(String),
}

impl EvalError {
    pub fn usage(msg: impl Into<String>) -> Self {
        EvalError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        EvalError::Data(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        EvalError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 for usage errors, 2 for everything data-related.
    pub fn exit_code(&self) -> i32 {
        match self {
            EvalError::Usage(_) => 1,
            _ => 2,
        }
    }
}
