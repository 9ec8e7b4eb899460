use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("move precondition failed: {0}")]
    MovePrecondition(String),

    #[error("step {index} (`{step}`): {source}")]
    Step {
        index: usize,
        step: String,
        #[source]
        source: Box<Error>,
    },

    #[error("invariant not preserved: {0}")]
    InvariantViolation(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::MovePrecondition(msg.into())
    }

    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: msg.into(),
        }
    }
}
