use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The variants are coarse on purpose: callers (the CLI, the C ABI) only
/// need to distinguish bad input from numerical trouble.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested point is a pole of the function.
    #[error("pole: {0}")]
    Pole(String),

    /// A quadrature, series, or eigensolver did not reach its tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The requested method does not apply at these parameters.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// Malformed configuration or command-line input.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    /// Process exit code: 2 for usage/domain problems, 3 for numerical
    /// convergence failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
