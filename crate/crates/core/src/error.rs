use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid value {value:?} for {kind} feature {feature} on language {language}")]
    InvalidFeatureValue {
        language: String,
        feature: String,
        kind: &'static str,
        value: String,
    },

    #[error("language {language} is labeled both {first:?} and {second:?}")]
    LabelConflict {
        language: String,
        first: String,
        second: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected width {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("unclassifiable: {0}")]
    Unclassifiable(String),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("class {0:?} has a single member and cannot be split")]
    SingletonClass(String),

    #[error("unknown language {0}")]
    UnknownLanguage(String),

    #[error("training set contains only one class")]
    SingleClass,

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("report serialization: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
