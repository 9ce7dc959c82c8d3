use thiserror::Error;

/// Errors produced by grid construction, assembly, solution and I/O.
#[derive(Debug, Error)]
pub enum TpsaError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("material parameters violate the admissible range: {0}")]
    MaterialBounds(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl TpsaError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        TpsaError::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = TpsaError> = std::result::Result<T, E>;
