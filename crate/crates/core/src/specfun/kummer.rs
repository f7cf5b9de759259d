//! Kummer's confluent hypergeometric function 1F1.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;
const LN_F64_MAX: f64 = 709.782_712_893_384;

/// `1F1(a; b; x)`.
///
/// Negative arguments are routed through the Kummer transform
/// `1F1(a; b; x) = e^x 1F1(b - a; b; -x)` so the series is summed at a
/// positive argument, where its terms do not alternate for the parameter
/// ranges produced by the 3/2 bond formula.
pub fn kummer_1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::domain(
            "kummer_1f1",
            format!("b = {b} is a nonpositive integer"),
        ));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < 0.0 {
        let (ln_abs, sign) = series_parts(b - a, b, -x)?;
        let ln_val = x + ln_abs;
        if ln_val > LN_F64_MAX {
            return Err(Error::Overflow {
                routine: "kummer_1f1",
            });
        }
        return Ok(sign * ln_val.exp());
    }
    let (ln_abs, sign) = series_parts(a, b, x)?;
    if ln_abs > LN_F64_MAX {
        return Err(Error::Overflow {
            routine: "kummer_1f1",
        });
    }
    Ok(sign * ln_abs.exp())
}

/// Taylor series at `x > 0` with running rescaling: returns `(ln |S|, sign)`.
fn series_parts(a: f64, b: f64, x: f64) -> Result<(f64, f64)> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut scale = 0.0_f64;
    let mut quiet = 0u32;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * x / ((b + kf) * (kf + 1.0));
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() {
            quiet += 1;
            // a few consecutive negligible terms, in case (a)_k passes through zero
            if quiet >= 3 {
                return Ok((scale + sum.abs().ln(), sum.signum()));
            }
        } else {
            quiet = 0;
        }
        if sum.abs() > 1e250 {
            let shift = 1e-200;
            sum *= shift;
            term *= shift;
            scale -= shift.ln();
        }
    }
    Err(Error::NoConvergence {
        routine: "kummer_1f1",
        iterations: MAX_TERMS,
        residual: (term / sum).abs(),
    })
}
