use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid kernel, grid or solver configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument violated an operation's precondition.
    #[error("argument error: {0}")]
    Argument(String),

    /// A quadrature or transform failed to reach its tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The time marcher produced non-finite values.
    #[error("divergence at step {step} (t = {time}): {detail}")]
    Divergence {
        step: usize,
        time: f64,
        detail: String,
    },

    /// The Neumann extension block could not be factorized.
    #[error("singular extension system (pivot ratio estimate {pivot_ratio:e})")]
    Singular { pivot_ratio: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
