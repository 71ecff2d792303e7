use thiserror::Error;

/// Errors raised while loading graphs, parsing queries or evaluating them.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input text. `line` and `column` are 1-based.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// A construct that the selected language dialect does not allow.
    #[error("dialect violation: {0}")]
    Dialect(String),

    /// Forward chaining produced more triples than the configured cap.
    #[error("closure aborted: more than {cap} derived triples")]
    TripleCap { cap: usize },

    /// The query names a graph that is not part of the dataset.
    #[error("unknown graph reference {0}")]
    UnknownGraph(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// Brute-force reference evaluation refused an input that is too large.
    #[error("input too large for exhaustive evaluation: {0}")]
    TooLarge(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
