use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("dataset root {} does not exist", .0.display())]
    MissingRoot(PathBuf),
    #[error("invalid manifest {}: {message}", path.display())]
    Manifest { path: PathBuf, message: String },
    #[error("no metrics selected")]
    EmptySelection,
    #[error("no algorithms selected")]
    NoAlgorithms,
    #[error("score matrix has no scored cells")]
    EmptyMatrix,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("inconsistent score matrix: {0}")]
    InvalidMatrix(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Core(#[from] mefb_core::Error),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
