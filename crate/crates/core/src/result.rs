//! Common result type carried from the pricers to reporting layers.

use std::time::Duration;

/// Which engine produced a price.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Rmq,
    MonteCarlo,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Rmq => "rmq",
            Method::MonteCarlo => "mc",
        }
    }
}

/// A price with its provenance, sampling error when stochastic, and timing.
#[derive(Debug, Clone)]
pub struct PriceResult {
    pub value: f64,
    pub method: Method,
    /// Standard error of the estimate; `None` for deterministic engines.
    pub std_error: Option<f64>,
    pub wall_time: Duration,
}

impl PriceResult {
    pub fn deterministic(value: f64, method: Method, wall_time: Duration) -> Self {
        PriceResult {
            value,
            method,
            std_error: None,
            wall_time,
        }
    }

    pub fn stochastic(value: f64, std_error: f64, wall_time: Duration) -> Self {
        PriceResult {
            value,
            method: Method::MonteCarlo,
            std_error: Some(std_error),
            wall_time,
        }
    }
}
