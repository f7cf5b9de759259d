//! Recursive marginal quantization (RMQ) of scalar SDEs and its joint
//! two-dimensional extension.
//!
//! Each time step carries an optimal codeword grid for the Gaussian-mixture
//! approximation of the next marginal law, companion probabilities, and a
//! row-stochastic one-step transition matrix. Grid construction is
//! sequential across steps; finished grids are immutable and safe to price
//! from concurrently.

mod bvn;
mod grid;
mod joint;
mod optimize;
mod surrogate;

pub use bvn::bvn_cdf;
pub use grid::{
    rmq_build, rmq_build_sized, transition_matrix, QuantGrid, QuantStep, TransitionMatrix,
};
pub use joint::{joint_rmq_build, JointQuantGrid};
pub use optimize::{companion_probs, distortion, optimize_codewords, optimize_codewords_traced};
pub use surrogate::{mixture_moments, GaussianSurrogate, MixtureComponent, SchemeOrder};
