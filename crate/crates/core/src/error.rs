use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid arity: {0}")]
    InvalidArity(String),

    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),

    #[error("invalid edge {edge:?}: {reason}")]
    InvalidEdge { edge: Vec<usize>, reason: String },

    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("parameter undefined: {0}")]
    UndefinedParameter(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("desk-scale guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("glued patterns must share exactly one vertex, got {0}")]
    OverlapNotSingleton(usize),

    #[error("malformed structure: {0}")]
    MalformedStructure(String),

    #[error("absorption failed: {0}")]
    AbsorptionFailed(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
