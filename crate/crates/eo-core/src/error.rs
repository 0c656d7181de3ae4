use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("singular matrix")]
    Singular,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("elements belong to different fields")]
    FieldMismatch,

    #[error("elements belong to different Weyl groups")]
    GroupMismatch,

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    /// Bad caller input: violated precondition, unsupported parameters.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A cross-check between two independent derivations failed.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
