use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A function was evaluated outside its domain (acos overshoot, field pole, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The triangle collapsed (vanishing leading side).
    #[error("degenerate triangle: {0}")]
    Degenerate(String),
    /// An inverse sine hit its turning point.
    #[error("branch error: {0}")]
    Branch(String),
    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge after {subdivisions} subdivisions (value {value:e}, error estimate {error:e})")]
    NoConvergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },
    /// An integrand returned NaN or an infinity.
    #[error("non-finite integrand value at x = {0}")]
    NonFinite(f64),
}

impl Error {
    /// True for errors caused by the caller's inputs, false for numerical failures.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::Domain(_) | Error::Degenerate(_) | Error::Branch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(msg()))
    }
}
