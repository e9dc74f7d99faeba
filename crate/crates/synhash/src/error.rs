use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// A data error tied to a file, and to a line when one is known.
    #[error("{}{}: {message}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Data {
        path: PathBuf,
        line: Option<usize>,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] synhash_core::Error),
}

impl Error {
    pub fn data(path: impl Into<PathBuf>, line: Option<usize>, message: impl ToString) -> Self {
        Error::Data {
            path: path.into(),
            line,
            message: message.to_string(),
        }
    }

    /// Process exit code: 1 for usage and configuration problems, 2 for data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Config(_) => 1,
            _ => 2,
        }
    }
}
