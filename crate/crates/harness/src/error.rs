use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerical(blindcent::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("plot: {0}")]
    Plot(String),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 usage, 2 numerical/degeneracy, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 1,
            HarnessError::Numerical(_) => 2,
            HarnessError::Io { .. } | HarnessError::Csv(_) | HarnessError::Plot(_) => 3,
        }
    }
}

impl From<blindcent::Error> for HarnessError {
    fn from(e: blindcent::Error) -> Self {
        if e.is_numerical() {
            HarnessError::Numerical(e)
        } else {
            HarnessError::Usage(e.to_string())
        }
    }
}
