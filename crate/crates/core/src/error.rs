use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range for a finite expansion of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("parse error at `{token}`: {message}")]
    Parse { token: String, message: String },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("precision exhausted at {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("period not found within {searched} complete quotients")]
    PeriodNotFound { searched: usize },
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
