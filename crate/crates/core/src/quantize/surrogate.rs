//! One-step Gaussian surrogates of the SDE transition: the discretization
//! scheme whose conditional mean/variance the marginal quantizer sees.

use crate::error::{Error, Result};
use crate::models::{Rate32Params, TcevParams};

/// Weak order of the underlying scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeOrder {
    Euler,
    HigherOrder,
}

type StateFn = Box<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Conditional one-step law `X_{t+dt} | X_t = x ~ N(mean(x,t,dt), var(x,t,dt))`.
pub struct GaussianSurrogate {
    mean_fn: StateFn,
    var_fn: StateFn,
    pub order: SchemeOrder,
    /// Lower bound of the state domain; quantizer grids are clamped here.
    /// Set for strictly positive processes, absent for free processes.
    pub state_floor: Option<f64>,
}

impl GaussianSurrogate {
    pub fn new(
        mean_fn: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        var_fn: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        order: SchemeOrder,
    ) -> Self {
        GaussianSurrogate {
            mean_fn: Box::new(mean_fn),
            var_fn: Box::new(var_fn),
            order,
            state_floor: None,
        }
    }

    /// Marks the state space as bounded below (positivity clamp for the
    /// quantizer grids).
    pub fn with_floor(mut self, floor: f64) -> Self {
        self.state_floor = Some(floor);
        self
    }

    #[inline]
    pub fn mean(&self, x: f64, t: f64, dt: f64) -> f64 {
        (self.mean_fn)(x, t, dt)
    }

    #[inline]
    pub fn var(&self, x: f64, t: f64, dt: f64) -> f64 {
        (self.var_fn)(x, t, dt)
    }

    /// Euler surrogate from drift/diffusion coefficient functions:
    /// `mean = x + a(x,t) dt`, `var = b(x,t)^2 dt`.
    pub fn euler(
        drift: impl Fn(f64, f64) -> f64 + Send + Sync + 'static + Clone,
        diffusion: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        GaussianSurrogate::new(
            move |x, t, dt| x + drift(x, t) * dt,
            move |x, t, dt| {
                let b = diffusion(x, t);
                b * b * dt
            },
            SchemeOrder::Euler,
        )
    }

    /// Euler surrogate of the TCEV discounted GOP.
    pub fn tcev_euler(p: &TcevParams) -> Self {
        let (p1, p2) = (*p, *p);
        GaussianSurrogate::new(
            move |x, t, dt| x + p1.drift_unchecked(x, t) * dt,
            move |x, t, dt| {
                let b = p2.diffusion_unchecked(x, t);
                b * b * dt
            },
            SchemeOrder::Euler,
        )
        .with_floor(1e-10)
    }

    /// Euler surrogate of the 3/2 short rate.
    pub fn rate32_euler(p: &Rate32Params) -> Self {
        let (p1, p2) = (*p, *p);
        GaussianSurrogate::new(
            move |r, _, dt| r + p1.drift_unchecked(r) * dt,
            move |r, _, dt| {
                let b = p2.diffusion_unchecked(r);
                b * b * dt
            },
            SchemeOrder::Euler,
        )
        .with_floor(1e-10)
    }

    /// Weak order 2.0 surrogate of the TCEV discounted GOP. Coefficients
    /// are frozen at the step start; the moment corrections are
    ///
    /// `mean = x + a dt + (a a' + b^2 a''/2) dt^2 / 2`
    /// `var  = b^2 dt + ((b b')^2 / 2 + b c1) dt^2 + c1^2 dt^3 / 4`,
    /// `c1 = a b' + a' b + b^2 b'' / 2`.
    pub fn tcev_weak2(p: &TcevParams) -> Self {
        let p = *p;
        let coeffs = move |x: f64, t: f64| {
            let al = p.alpha(t);
            let ca = p.c * p.c * al.powf(2.0 * (1.0 - p.a));
            let cb = p.c * al.powf(1.0 - p.a);
            let a0 = ca * x.powf(2.0 * p.a - 1.0);
            let a1 = ca * (2.0 * p.a - 1.0) * x.powf(2.0 * p.a - 2.0);
            let a2 = ca * (2.0 * p.a - 1.0) * (2.0 * p.a - 2.0) * x.powf(2.0 * p.a - 3.0);
            let b0 = cb * x.powf(p.a);
            let b1 = cb * p.a * x.powf(p.a - 1.0);
            let b2 = cb * p.a * (p.a - 1.0) * x.powf(p.a - 2.0);
            (a0, a1, a2, b0, b1, b2)
        };
        GaussianSurrogate::new(
            move |x, t, dt| {
                let (a0, a1, a2, b0, _, _) = coeffs(x, t);
                x + a0 * dt + 0.5 * (a0 * a1 + 0.5 * b0 * b0 * a2) * dt * dt
            },
            move |x, t, dt| {
                let (a0, a1, _, b0, b1, b2) = coeffs(x, t);
                let c1 = a0 * b1 + a1 * b0 + 0.5 * b0 * b0 * b2;
                let v = b0 * b0 * dt
                    + (0.5 * (b0 * b1).powi(2) + b0 * c1) * dt * dt
                    + 0.25 * c1 * c1 * dt * dt * dt;
                v.max(1e-12 * b0 * b0 * dt)
            },
            SchemeOrder::HigherOrder,
        )
        .with_floor(1e-10)
    }

    /// Weak order 2.0 surrogate of the 3/2 short rate.
    pub fn rate32_weak2(p: &Rate32Params) -> Self {
        let p = *p;
        let coeffs = move |r: f64| {
            let a0 = p.kappa * (p.theta * r - r * r);
            let a1 = p.kappa * (p.theta - 2.0 * r);
            let a2 = -2.0 * p.kappa;
            let b0 = p.sigma * r.powf(1.5);
            let b1 = 1.5 * p.sigma * r.sqrt();
            let b2 = 0.75 * p.sigma / r.sqrt();
            (a0, a1, a2, b0, b1, b2)
        };
        GaussianSurrogate::new(
            move |r, _, dt| {
                let (a0, a1, a2, b0, _, _) = coeffs(r);
                r + a0 * dt + 0.5 * (a0 * a1 + 0.5 * b0 * b0 * a2) * dt * dt
            },
            move |r, _, dt| {
                let (a0, a1, _, b0, b1, b2) = coeffs(r);
                let c1 = a0 * b1 + a1 * b0 + 0.5 * b0 * b0 * b2;
                let v = b0 * b0 * dt
                    + (0.5 * (b0 * b1).powi(2) + b0 * c1) * dt * dt
                    + 0.25 * c1 * c1 * dt * dt * dt;
                v.max(1e-12 * b0 * b0 * dt)
            },
            SchemeOrder::HigherOrder,
        )
        .with_floor(1e-10)
    }
}

/// One Gaussian component of a step-ahead marginal mixture.
#[derive(Debug, Clone, Copy)]
pub struct MixtureComponent {
    pub mean: f64,
    pub var: f64,
    pub weight: f64,
}

/// The step-`k+1` marginal law seen from a quantized step `k`:
/// `sum_i p_i N(mean(x_i), var(x_i))`.
pub fn mixture_moments(
    codewords: &[f64],
    probs: &[f64],
    surrogate: &GaussianSurrogate,
    t: f64,
    dt: f64,
) -> Result<Vec<MixtureComponent>> {
    if codewords.len() != probs.len() {
        return Err(Error::GridMismatch(format!(
            "{} codewords vs {} probabilities",
            codewords.len(),
            probs.len()
        )));
    }
    codewords
        .iter()
        .zip(probs)
        .map(|(&x, &w)| {
            let var = surrogate.var(x, t, dt);
            if !(var > 0.0) {
                return Err(Error::domain(
                    "mixture_moments",
                    format!("nonpositive variance {var} at codeword {x}"),
                ));
            }
            Ok(MixtureComponent {
                mean: surrogate.mean(x, t, dt),
                var,
                weight: w,
            })
        })
        .collect()
}

/// Weighted mean and standard deviation of a Gaussian mixture, with the
/// spread accumulated against the mean so degenerate components keep a
/// representable variance.
pub(crate) fn mixture_mean_sd(mix: &[MixtureComponent]) -> (f64, f64) {
    let mean: f64 = mix.iter().map(|c| c.weight * c.mean).sum();
    let var: f64 = mix
        .iter()
        .map(|c| c.weight * (c.var + (c.mean - mean) * (c.mean - mean)))
        .sum();
    (mean, var.sqrt())
}
