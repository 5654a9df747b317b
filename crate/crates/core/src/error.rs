use thiserror::Error;

/// Errors raised by the algebra, kernel and filter layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("complex Gaussian exponent {exponent:.3e} exceeds the overflow limit {limit}")]
    KernelOverflow { exponent: f64, limit: f64 },

    #[error("configuration error at `{path}`: {msg}")]
    Config { path: String, msg: String },

    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    #[error("step {index}: {source}")]
    AtStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("trial {trial}, arm `{arm}`: {source}")]
    Arm {
        trial: usize,
        arm: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
