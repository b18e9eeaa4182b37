use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent user input.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("cannot factor zero")]
    FactorZero,

    #[error("zero argument to {0}")]
    ZeroArgument(&'static str),

    #[error("degenerate form: the Gram matrix is singular")]
    Degenerate,

    /// A mathematical precondition of the operation does not hold.
    #[error("{0}")]
    Precondition(String),

    /// The input lies outside the regime the toolkit can decide.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal verification identity failed.
    #[error("certificate failure: {0}")]
    Certificate(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn cert(msg: impl Into<String>) -> Self {
        Error::Certificate(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(format!("json: {e}"))
    }
}
