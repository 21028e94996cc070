use thiserror::Error;

/// Errors raised by estimators, samplers and the simulation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} = {value} is outside the admissible domain")]
    Domain { what: &'static str, value: f64 },

    /// The spatial median iteration stopped before meeting its tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence {
        iterate: Vec<f64>,
        residual: f64,
        iterations: usize,
    },

    #[error("scale estimate of column {column} is zero")]
    DegenerateScale { column: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
