//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Syntax or semantic error while parsing a text format.
    #[error("{context} line {line}: {msg}")]
    Parse {
        context: String,
        line: usize,
        msg: String,
    },

    #[error("input count mismatch: expected {expected}, got {got}")]
    InputCount { expected: usize, got: usize },

    #[error("output count mismatch: expected {expected}, got {got}")]
    OutputCount { expected: usize, got: usize },

    #[error("key size {requested} not satisfiable: {available} candidate host wires")]
    KeySize { requested: usize, available: usize },

    #[error("key length mismatch: design carries {expected} key bits, got {got}")]
    KeyLength { expected: usize, got: usize },

    #[error("key gate index {index} out of range ({count} key gates)")]
    KeyIndex { index: usize, count: usize },

    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("embed fingerprint mismatch: model \"{model}\", data \"{data}\"")]
    Fingerprint { model: String, data: String },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("non-finite energy at iteration {iteration}")]
    NonFiniteEnergy { iteration: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(context: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            context: context.to_string(),
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
