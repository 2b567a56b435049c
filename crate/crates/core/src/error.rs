use thiserror::Error;

/// Errors produced by the laboratory.
///
/// `ParameterWindow` is kept separate from `InvalidParameter` because the
/// command line maps it to its own exit code: it signals that the requested
/// exponents fall outside the range where an inequality is stated at all.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameter window violated: {0}")]
    ParameterWindow(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
