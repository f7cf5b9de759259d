//! Error type shared by every module of the pricing library.

use thiserror::Error;

/// Errors surfaced by numerical routines and pricers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument violated a precondition of the routine.
    #[error("domain error in {routine}: {message}")]
    Domain {
        routine: &'static str,
        message: String,
    },

    /// An iterative method failed to reach its tolerance.
    #[error("{routine} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// The result exceeds the representable floating-point range and no
    /// log-scaled variant was requested.
    #[error("overflow in {routine}; use the log-scaled variant")]
    Overflow { routine: &'static str },

    /// A grid and a contract specification do not fit together.
    #[error("grid/spec mismatch: {0}")]
    GridMismatch(String),

    /// Grid construction failed at a particular time step.
    #[error("quantizer failed at step {step}: {source}")]
    QuantizerStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(routine: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            routine,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
