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

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate word `{0}`")]
    DuplicateWord(String),

    #[error("unknown word `{0}`")]
    UnknownWord(String),

    #[error("word `{0}` is missing from the tour")]
    MissingWord(String),

    #[error("need at least {needed} words, got {got}")]
    TooFewWords { needed: usize, got: usize },

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("invalid embeddings: {0}")]
    InvalidEmbeddings(String),

    #[error("{0}")]
    OutOfRange(String),

    #[error("principal component {component} is degenerate (eigenvalue {eigenvalue:e})")]
    DegenerateComponent { component: usize, eigenvalue: f64 },

    #[error("representation mismatch: {0}")]
    ParamMismatch(String),

    #[error("training set is empty")]
    EmptyTraining,

    #[error("malformed TSPLIB input: {0}")]
    Tsplib(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
