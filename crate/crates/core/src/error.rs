use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Each variant belongs to one of four categories (parse, precondition,
/// numeric, io) which the CLI maps onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at `{token}`: {message}")]
    Parse { token: String, message: String },

    #[error("malformed simplex: {0}")]
    Shape(String),

    #[error("degenerate simplex: vertices are affinely dependent")]
    Degenerate,

    #[error("divergent integral: exponent {exponent} must be > -1")]
    Divergent { exponent: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("exact arithmetic requires rational inputs: {0}")]
    NotExact(String),

    #[error("overflow: exponent {exponent} exceeds the double-precision range")]
    Overflow { exponent: f64 },

    #[error("evaluation failed at {point:?}: {message}")]
    Evaluation { point: Vec<f64>, message: String },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("closed form disagrees with cubature: closed {closed}, cubature {cubature} (relative {relative:e})")]
    Discrepancy {
        closed: f64,
        cubature: f64,
        relative: f64,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse classification used for process exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Precondition,
    Numeric,
    Io,
}

impl Error {
    pub fn parse(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            message: message.into(),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } => ErrorKind::Parse,
            Error::Shape(_)
            | Error::Degenerate
            | Error::Divergent { .. }
            | Error::Domain(_)
            | Error::Precondition(_)
            | Error::Unsupported(_)
            | Error::NotExact(_) => ErrorKind::Precondition,
            Error::Overflow { .. }
            | Error::Evaluation { .. }
            | Error::Numeric(_)
            | Error::Discrepancy { .. } => ErrorKind::Numeric,
            Error::Io { .. } => ErrorKind::Io,
        }
    }

    /// Process exit code: 2 parse, 3 precondition, 4 numeric, 5 file access.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Parse => 2,
            ErrorKind::Precondition => 3,
            ErrorKind::Numeric => 4,
            ErrorKind::Io => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
