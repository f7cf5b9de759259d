//! Standard normal distribution functions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Standard normal CDF, absolute error below 1e-14.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density.
#[inline]
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}
