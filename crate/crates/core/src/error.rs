use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The oracle refused a query, usually because it exceeds its size cap.
    #[error("oracle refused {problem} query on {vertices} vertices / {edges} edges: {reason}")]
    OracleRefused {
        problem: String,
        vertices: usize,
        edges: usize,
        reason: String,
    },

    #[error("kernel refused instance on {vertices} vertices (cap {cap})")]
    KernelRefused { vertices: usize, cap: usize },

    /// A condition that the algorithms guarantee was observed to fail.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
