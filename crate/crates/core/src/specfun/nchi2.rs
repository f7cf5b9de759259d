//! Noncentral chi-squared distribution with fractional degrees of freedom.

use super::bessel::bessel_i_ln;
use super::gamma::{ln_gamma_unchecked, reg_lower_gamma};
use crate::error::{Error, Result};

fn check_args(routine: &'static str, x: f64, k: f64, lambda: f64) -> Result<()> {
    if !(x >= 0.0) {
        return Err(Error::domain(routine, format!("x = {x} must be >= 0")));
    }
    if !(k > 0.0) {
        return Err(Error::domain(routine, format!("k = {k} must be > 0")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::domain(
            routine,
            format!("lambda = {lambda} must be >= 0"),
        ));
    }
    Ok(())
}

/// CDF of the noncentral chi-squared law with `k` degrees of freedom and
/// noncentrality `lambda`, both real.
///
/// Poisson-weighted central chi-squared mixture, summed outward from the
/// modal Poisson index so that large noncentralities lose no mass. The
/// central gamma CDF is carried along both directions by the recurrence
/// `P(s + 1, y) = P(s, y) - y^s e^{-y} / Gamma(s + 1)`.
pub fn nchi2_cdf(x: f64, k: f64, lambda: f64) -> Result<f64> {
    check_args("nchi2_cdf", x, k, lambda)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    if lambda == 0.0 {
        return reg_lower_gamma(k / 2.0, x / 2.0);
    }

    let h = lambda / 2.0;
    let y = x / 2.0;
    let j0 = h.floor();

    // modal Poisson weight and central CDF / increment at the mode
    let w0 = (-h + j0 * h.ln() - ln_gamma_unchecked(j0 + 1.0)).exp();
    let s0 = k / 2.0 + j0;
    let p0 = reg_lower_gamma(s0, y)?;
    // t_j = y^{s_j} e^{-y} / Gamma(s_j + 1), the P(s, y) -> P(s + 1, y) decrement
    let t0 = (s0 * y.ln() - y - ln_gamma_unchecked(s0 + 1.0)).exp();

    let mut sum = w0 * p0;
    let mut wsum = w0;

    // upward sweep
    let (mut w, mut p, mut t) = (w0, p0, t0);
    let mut j = j0;
    let max_j = j0 + 2000.0 + 20.0 * h.sqrt();
    while j < max_j {
        w *= h / (j + 1.0);
        p = (p - t).max(0.0);
        t *= y / (k / 2.0 + j + 1.0);
        sum += w * p;
        wsum += w;
        j += 1.0;
        if wsum >= 1.0 - 1e-16 || (w < 1e-18 && j > j0 + 3.0) {
            break;
        }
    }

    // downward sweep
    let (mut w, mut p, mut t) = (w0, p0, t0);
    let mut j = j0;
    while j >= 1.0 {
        w *= j / h;
        t *= (k / 2.0 + j) / y;
        p = (p + t).min(1.0);
        sum += w * p;
        wsum += w;
        j -= 1.0;
        if wsum >= 1.0 - 1e-16 || w < 1e-18 {
            break;
        }
    }

    Ok(sum.clamp(0.0, 1.0))
}

/// Density of the noncentral chi-squared law, consistent with [`nchi2_cdf`].
pub fn nchi2_pdf(x: f64, k: f64, lambda: f64) -> Result<f64> {
    check_args("nchi2_pdf", x, k, lambda)?;
    if x == 0.0 {
        // boundary value of the density
        return Ok(if k > 2.0 {
            0.0
        } else if k == 2.0 {
            0.5 * (-lambda / 2.0).exp()
        } else {
            f64::INFINITY
        });
    }
    if lambda == 0.0 {
        let s = k / 2.0;
        let ln_f = (s - 1.0) * (x / 2.0).ln() - x / 2.0 - ln_gamma_unchecked(s) - 2.0_f64.ln();
        return Ok(ln_f.exp());
    }
    // (1/2) e^{-(x+lambda)/2} (x/lambda)^{(k-2)/4} I_{k/2-1}(sqrt(lambda x))
    let ln_f = -(x + lambda) / 2.0
        + (k - 2.0) / 4.0 * (x.ln() - lambda.ln())
        + bessel_i_ln(k / 2.0 - 1.0, (lambda * x).sqrt())?
        - 2.0_f64.ln();
    Ok(if ln_f < -745.0 { 0.0 } else { ln_f.exp() })
}
