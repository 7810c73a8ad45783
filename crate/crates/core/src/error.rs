use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure in {what}: achieved error {achieved:e} > tolerance {tolerance:e}")]
    Numerical {
        what: &'static str,
        achieved: f64,
        tolerance: f64,
    },

    #[error("degenerate diffusion: {0}")]
    DegenerateDiffusion(String),

    #[error("linear solver failed after {iterations} iterations (relative residual {residual:e})")]
    Solver { iterations: usize, residual: f64 },

    #[error("scheme error: {0}")]
    Scheme(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("paging consistency violation: {0}")]
    Consistency(String),

    #[error("degenerate location area: {0}")]
    DegenerateLa(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
