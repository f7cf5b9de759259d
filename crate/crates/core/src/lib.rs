//! Pricing engine for long-dated contracts under the benchmark approach.
//!
//! The growth-optimal portfolio (GOP) serves as numeraire and prices are
//! expectations of benchmarked payoffs under the real-world measure:
//! `V_t = S_t E[V_T / S_T | F_t]`. The discounted GOP follows the
//! time-dependent CEV model, a power of a time-changed squared Bessel
//! process of dimension above two, which rules out an equivalent
//! risk-neutral measure and makes long-dated real-world prices strictly
//! cheaper than their hypothetical risk-neutral counterparts.
//!
//! The crate provides three pricing engines over the same contracts:
//!
//! - [`analytic`]: closed forms for European options, fair zero-coupon
//!   bonds and the 3/2 short-rate bond function;
//! - [`quantize`] + [`pricers`]: recursive marginal quantization (RMQ) of
//!   the state processes with grid-based pricers, including the joint
//!   two-dimensional extension for a correlated short rate;
//! - [`montecarlo`]: exact long-step and Euler path simulation with
//!   least-squares Monte Carlo for Bermudan exercise.

// validation guards are written as negations (e.g. `!(x > 0.0)`) so that
// NaN arguments fail them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod besq;
pub mod error;
pub mod models;
pub mod montecarlo;
pub mod pricers;
pub mod quad;
pub mod quantize;
pub mod result;
pub mod specfun;

pub use analytic::{EuropeanSpec, KummerBondParams, OptionKind};
pub use besq::{BesqSpec, Boundary, CirParams};
pub use error::{Error, Result};
pub use models::{paper_rate32, paper_tcev, Rate32Params, SavingsAccount, TcevParams};
pub use montecarlo::{McConfig, McEstimate};
pub use pricers::{BermudanSpec, BondOptionSpec};
pub use quantize::{GaussianSurrogate, JointQuantGrid, QuantGrid, SchemeOrder};
pub use result::{Method, PriceResult};
