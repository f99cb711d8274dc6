use std::fmt;

/// Errors reported by instance construction, parsing and the metric helpers.
#[derive(Debug)]
pub enum Error {
    /// An argument violates a documented precondition.
    InvalidArgument(String),
    /// A size exceeds a hard limit (e.g. exhaustive enumeration bounds).
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    /// A text document could not be parsed; `line` is 1-based.
    Parse { line: usize, message: String },
    /// A reference front is degenerate in at least one objective.
    DegenerateReference(String),
    Io(std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::TooLarge { what, limit, got } => {
                write!(f, "{what} too large: {got} exceeds limit {limit}")
            }
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::DegenerateReference(msg) => write!(f, "degenerate reference front: {msg}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}
