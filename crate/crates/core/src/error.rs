use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparameters(String),

    #[error("unknown category `{0}`")]
    UnknownCategory(String),

    #[error("duplicate category `{0}`")]
    DuplicateCategory(String),

    #[error("the model has no categories; train it first")]
    EmptyModel,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: not a directory")]
    NotADirectory { path: PathBuf },

    #[error("malformed model file: {0}")]
    ModelFormat(#[source] serde_json::Error),

    #[error("inconsistent model file: {0}")]
    CorruptModel(String),

    #[error("incompatible model format version {found} (expected {expected})")]
    IncompatibleVersion { found: String, expected: u32 },

    #[error("label sequences differ in length ({y_true} true vs {y_pred} predicted)")]
    LengthMismatch { y_true: usize, y_pred: usize },

    #[error("cannot evaluate an empty set of predictions")]
    EmptyEvaluation,

    #[error("invalid fold count k={k} for {n} documents (need 2 <= k <= n)")]
    InvalidFoldCount { k: usize, n: usize },

    #[error("hyperparameter grid for `{0}` is empty")]
    EmptyGrid(&'static str),

    #[error("evaluation history is empty")]
    EmptyHistory,

    #[error("{path}:{line}: corrupt history record: {source}")]
    HistoryRecord {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
