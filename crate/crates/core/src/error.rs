use thiserror::Error;

/// Failures raised by the library.
///
/// Mathematical violations (axiom failures, non-commuting squares, invalid
/// certificates) are reported as data; this type is reserved for inputs that
/// cannot be processed at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// The instance violates a standing hypothesis (missing pullback, invalid
    /// class, invalid factorization system).
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("input error: {0}")]
    Input(String),

    /// An engine invariant failed. Never expected on validated inputs.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
