use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("preprocessing error: {0}")]
    Preprocess(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("prediction error: {0}")]
    Prediction(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("schema mismatch: model expects {expected}, data has {found}")]
    SchemaMismatch { expected: String, found: String },

    #[error("model format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Prefixes the message of training errors with some context, such as the
    /// label whose sub-problem failed.
    pub fn context(self, what: &str) -> Self {
        match self {
            Error::Training(m) => Error::Training(format!("{what}: {m}")),
            Error::Prediction(m) => Error::Prediction(format!("{what}: {m}")),
            Error::Evaluation(m) => Error::Evaluation(format!("{what}: {m}")),
            other => other,
        }
    }
}
