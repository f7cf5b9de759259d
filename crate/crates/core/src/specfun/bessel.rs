//! Modified Bessel function of the first kind, real order.

use super::gamma::ln_gamma_signed;
use crate::error::{Error, Result};

const MAX_TERMS: usize = 4000;
const LN_F64_MAX: f64 = 709.782_712_893_384;

/// `I_nu(x)` for real `nu` and `x >= 0`.
///
/// Returns an overflow error when the value exceeds the representable range;
/// use [`bessel_i_ln`] in that regime.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    let (ln_abs, sign) = bessel_i_parts(nu, x)?;
    if ln_abs > LN_F64_MAX {
        return Err(Error::Overflow {
            routine: "bessel_i",
        });
    }
    Ok(sign * ln_abs.exp())
}

/// `ln I_nu(x)`, defined where `I_nu(x) > 0` (always the case for `nu > -1`,
/// `x > 0`). Avoids overflow for large arguments.
pub fn bessel_i_ln(nu: f64, x: f64) -> Result<f64> {
    let (ln_abs, sign) = bessel_i_parts(nu, x)?;
    if sign <= 0.0 && ln_abs.is_finite() {
        return Err(Error::domain(
            "bessel_i_ln",
            format!("I_{nu}({x}) is not positive"),
        ));
    }
    Ok(ln_abs)
}

/// Ascending series with running rescaling; all terms are positive for
/// `nu > -1`, so no cancellation occurs in the range used by the BESQ
/// densities. Returns `(ln |I|, sign)`.
fn bessel_i_parts(nu: f64, x: f64) -> Result<(f64, f64)> {
    if !(x >= 0.0) {
        return Err(Error::domain("bessel_i", format!("x = {x} must be >= 0")));
    }
    // integer negative orders reduce to positive ones
    if nu < 0.0 && nu.fract() == 0.0 {
        return bessel_i_parts(-nu, x);
    }
    if x == 0.0 {
        if nu == 0.0 {
            return Ok((0.0, 1.0)); // I_0(0) = 1
        }
        if nu > 0.0 {
            return Ok((f64::NEG_INFINITY, 1.0)); // value 0
        }
        return Err(Error::domain(
            "bessel_i",
            format!("I_{nu}(0) diverges for negative order"),
        ));
    }

    // first term (x/2)^nu / Gamma(nu + 1), in log space with sign
    let (lg, gsign) = ln_gamma_signed(nu + 1.0);
    let mut scale = nu * (x / 2.0).ln() - lg;
    let mut term = gsign;
    let mut sum = term;
    let q = x * x / 4.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (nu + kf + 1.0));
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() && kf > nu.abs() {
            return Ok((scale + sum.abs().ln(), sum.signum()));
        }
        if sum.abs() > 1e250 {
            let shift = 1e-200;
            sum *= shift;
            term *= shift;
            scale -= shift.ln();
        }
    }
    Err(Error::NoConvergence {
        routine: "bessel_i",
        iterations: MAX_TERMS,
        residual: term.abs() / sum.abs(),
    })
}
