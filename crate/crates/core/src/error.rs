use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the pipeline.
///
/// Variants split into two families: bad parameters supplied by the caller
/// (`InvalidConfig`) and problems with the data being processed (everything
/// else). The command-line driver maps the former to exit code 1 and the
/// latter to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Corpus { line: usize, message: String },

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    #[error("lexicon {}: {message}", path.display())]
    Lexicon { path: PathBuf, message: String },

    #[error("embeddings line {line}: {message}")]
    Embedding { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("no instance covers the rule")]
    ZeroCoverage,

    #[error("training data holds a single class")]
    SingleClass,

    #[error("feature schema mismatch: expected `{expected}`, found `{found}`")]
    SchemaMismatch { expected: String, found: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("document `{id}` lacks the `{label}` label")]
    MissingLabel { id: String, label: &'static str },

    #[error("missing artifact: {}", .0.display())]
    MissingArtifact(PathBuf),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    /// True for errors caused by caller-supplied parameters rather than data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidConfig(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
