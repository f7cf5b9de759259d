//! Scalar special functions behind every analytic formula in this crate:
//! gamma machinery, modified Bessel I of real order, Kummer's 1F1, the
//! noncentral chi-squared distribution and the standard normal law.
//!
//! All routines are pure, thread-safe and carry explicit accuracy contracts
//! in their documentation. Quantities at risk of overflow (`bessel_i`,
//! large-argument 1F1) expose log-scaled paths.

mod bessel;
mod gamma;
mod kummer;
mod nchi2;
mod normal;

pub use bessel::{bessel_i, bessel_i_ln};
pub use gamma::{ln_gamma, reg_lower_gamma};
pub use kummer::kummer_1f1;
pub use nchi2::{nchi2_cdf, nchi2_pdf};
pub use normal::{normal_cdf, normal_pdf};
