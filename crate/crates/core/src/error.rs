use thiserror::Error;

/// Errors raised by the numerical operators.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition (non-finite data, missing
    /// normalization, malformed literal, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An evaluation point or convolution support falls outside the grid.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// A grid is too coarse for the requested stencil or the evaluation
    /// point sits too close to the real axis.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// Overflow while exponentiating a field.
    #[error("overflow: {0}")]
    Overflow(String),

    /// |∂ρ| dropped below the quasiconformality guard; the input is outside
    /// the small-norm regime.
    #[error("degenerate derivative: {0}")]
    Degenerate(String),

    /// A flow snapshot lost strict monotonicity; refine the step size.
    #[error("step size too large: {0}")]
    StepSize(String),

    /// Textual object format could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
