//! Model parameterizations: the TCEV discounted-GOP dynamics with its
//! squared-Bessel time change and exact conditional sampling, the 3/2
//! short-rate SDE coefficients, and the constant-rate savings account.

use crate::error::{Error, Result};
use crate::specfun::nchi2_cdf;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

/// Time-dependent CEV parameters for the discounted GOP
/// `dX = c^2 a_t^{2(1-a)} X^{2a-1} dt + c a_t^{1-a} X^a dW`,
/// `a_t = alpha0 e^{eta t}`, together with the start value.
#[derive(Debug, Clone, Copy)]
pub struct TcevParams {
    pub alpha0: f64,
    pub eta: f64,
    pub c: f64,
    pub a: f64,
    /// Initial discounted GOP.
    pub x0: f64,
}

impl TcevParams {
    pub fn new(alpha0: f64, eta: f64, c: f64, a: f64, x0: f64) -> Result<Self> {
        if !(alpha0 > 0.0 && eta > 0.0 && c > 0.0 && x0 > 0.0) {
            return Err(Error::domain(
                "TcevParams",
                format!("alpha0 = {alpha0}, eta = {eta}, c = {c}, x0 = {x0} must all be > 0"),
            ));
        }
        if !(a < 1.0) {
            return Err(Error::domain("TcevParams", format!("a = {a} must be < 1")));
        }
        Ok(TcevParams {
            alpha0,
            eta,
            c,
            a,
            x0,
        })
    }

    /// Scale function `alpha_t = alpha0 e^{eta t}`.
    #[inline]
    pub fn alpha(&self, t: f64) -> f64 {
        self.alpha0 * (self.eta * t).exp()
    }

    /// Market price of risk `theta_t = c (x / alpha_t)^{a-1}`.
    #[inline]
    pub fn mpor(&self, x: f64, t: f64) -> f64 {
        self.c * (x / self.alpha(t)).powf(self.a - 1.0)
    }

    /// The exponent `2(1 - a)` mapping the discounted GOP onto BESQ space.
    #[inline]
    pub fn besq_exponent(&self) -> f64 {
        2.0 * (1.0 - self.a)
    }

    /// Drift of the discounted GOP at state `x`, time `t`.
    pub fn drift(&self, x: f64, t: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain("tcev_drift", format!("x = {x} must be > 0")));
        }
        Ok(self.drift_unchecked(x, t))
    }

    #[inline]
    pub(crate) fn drift_unchecked(&self, x: f64, t: f64) -> f64 {
        let al = self.alpha(t);
        self.c * self.c * al.powf(2.0 * (1.0 - self.a)) * x.powf(2.0 * self.a - 1.0)
    }

    /// Diffusion coefficient of the discounted GOP; equals `theta_t x`.
    pub fn diffusion(&self, x: f64, t: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain(
                "tcev_diffusion",
                format!("x = {x} must be > 0"),
            ));
        }
        Ok(self.diffusion_unchecked(x, t))
    }

    #[inline]
    pub(crate) fn diffusion_unchecked(&self, x: f64, t: f64) -> f64 {
        self.c * self.alpha(t).powf(1.0 - self.a) * x.powf(self.a)
    }

    /// Deterministic time change onto the squared Bessel clock:
    /// `phi(t) = (1-a) alpha0^{2(1-a)} c^2 / (2 eta) (e^{2(1-a) eta t} - 1)`.
    pub fn phi(&self, t: f64) -> f64 {
        let q = self.besq_exponent();
        (1.0 - self.a) * self.alpha0.powf(q) * self.c * self.c / (2.0 * self.eta)
            * ((q * self.eta * t).exp() - 1.0)
    }

    /// BESQ dimension of the discounted GOP, `(3 - 2a)/(1 - a) > 2`.
    #[inline]
    pub fn dimension(&self) -> f64 {
        (3.0 - 2.0 * self.a) / (1.0 - self.a)
    }

    /// Dimension under the hypothetical risk-neutral dynamics,
    /// `(1 - 2a)/(1 - a) = 4 - dimension < 2`. The candidate measure
    /// change fails to be a martingale precisely because this drops
    /// below the zero-attainability threshold.
    #[inline]
    pub fn rn_dimension(&self) -> f64 {
        (1.0 - 2.0 * self.a) / (1.0 - self.a)
    }

    /// Exact draw of `X_T` given `X_t = x_t` through the BESQ transition:
    /// with `y = x_t^{2(1-a)}` and `dphi = phi(T) - phi(t)`, the draw is
    /// `(dphi Q)^{1/(2(1-a))}` where `Q ~ chi'2(dimension, y/dphi)`.
    pub fn exact_sample<R: Rng + ?Sized>(
        &self,
        x_t: f64,
        t: f64,
        horizon: f64,
        rng: &mut R,
    ) -> Result<f64> {
        if !(x_t > 0.0) {
            return Err(Error::domain(
                "tcev_exact_sample",
                format!("x_t = {x_t} must be > 0"),
            ));
        }
        if !(horizon > t) {
            return Err(Error::domain(
                "tcev_exact_sample",
                format!("T = {horizon} must exceed t = {t}"),
            ));
        }
        let q = self.besq_exponent();
        let dphi = self.phi(horizon) - self.phi(t);
        if dphi <= 0.0 {
            return Ok(x_t);
        }
        let lambda = x_t.powf(q) / dphi;
        if lambda > 1e12 {
            // degenerate transition: the draw's relative spread is below
            // sqrt(8/lambda) ~ 3e-6, return the conditional mean
            return Ok((x_t.powf(q) + self.dimension() * dphi).powf(1.0 / q));
        }
        let draw = sample_nchi2(self.dimension(), lambda, rng);
        Ok((dphi * draw).powf(1.0 / q))
    }
}

/// Noncentral chi-squared draw by the Poisson mixture: `J ~ Poisson(lambda/2)`
/// then a central chi-squared with `k + 2J` degrees of freedom via a gamma
/// draw. Exact for fractional `k`.
pub fn sample_nchi2<R: Rng + ?Sized>(k: f64, lambda: f64, rng: &mut R) -> f64 {
    let j = if lambda > 0.0 {
        Poisson::new(lambda / 2.0)
            .expect("positive Poisson mean")
            .sample(rng)
    } else {
        0.0
    };
    let shape = k / 2.0 + j;
    Gamma::new(shape, 2.0)
        .expect("positive gamma shape")
        .sample(rng)
}

/// 3/2 short-rate parameters for `dr = kappa (theta r - r^2) dt + sigma r^{3/2} dW`.
#[derive(Debug, Clone, Copy)]
pub struct Rate32Params {
    pub kappa: f64,
    pub theta: f64,
    pub sigma: f64,
    pub r0: f64,
}

impl Rate32Params {
    pub fn new(kappa: f64, theta: f64, sigma: f64, r0: f64) -> Result<Self> {
        if !(kappa > 0.0 && theta > 0.0 && sigma > 0.0 && r0 > 0.0) {
            return Err(Error::domain(
                "Rate32Params",
                format!(
                    "kappa = {kappa}, theta = {theta}, sigma = {sigma}, r0 = {r0} must all be > 0"
                ),
            ));
        }
        Ok(Rate32Params {
            kappa,
            theta,
            sigma,
            r0,
        })
    }

    /// `kappa (theta r - r^2)`.
    pub fn drift(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain(
                "rate32_drift",
                format!("r = {r} must be > 0"),
            ));
        }
        Ok(self.drift_unchecked(r))
    }

    #[inline]
    pub(crate) fn drift_unchecked(&self, r: f64) -> f64 {
        self.kappa * (self.theta * r - r * r)
    }

    /// `sigma r^{3/2}`.
    pub fn diffusion(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain(
                "rate32_diffusion",
                format!("r = {r} must be > 0"),
            ));
        }
        Ok(self.diffusion_unchecked(r))
    }

    #[inline]
    pub(crate) fn diffusion_unchecked(&self, r: f64) -> f64 {
        self.sigma * r.powf(1.5)
    }
}

/// Deterministic savings account at a constant short rate.
#[derive(Debug, Clone, Copy)]
pub struct SavingsAccount {
    pub r: f64,
}

impl SavingsAccount {
    pub fn new(r: f64) -> Self {
        SavingsAccount { r }
    }

    /// `beta(t) = e^{r t}` with `beta(0) = 1`.
    #[inline]
    pub fn beta(&self, t: f64) -> f64 {
        (self.r * t).exp()
    }

    /// Discount factor `beta(t)/beta(T)`.
    #[inline]
    pub fn discount(&self, t: f64, horizon: f64) -> f64 {
        (-self.r * (horizon - t)).exp()
    }
}

/// The parameter set the experiments in this crate default to.
pub fn paper_tcev() -> TcevParams {
    TcevParams::new(51.34, 0.1239, 0.1010, 0.2868, 50.0).expect("valid parameter set")
}

/// Companion 3/2 short-rate parameter set.
pub fn paper_rate32() -> Rate32Params {
    Rate32Params::new(3.5726, 0.096, 0.7960, 0.05).expect("valid parameter set")
}

/// `E[1/X_T | X_t]` of the discounted GOP in closed form; used as the
/// analytic side of sampling cross-checks.
pub fn tcev_inverse_moment(p: &TcevParams, x_t: f64, t: f64, horizon: f64) -> Result<f64> {
    let q = p.besq_exponent();
    let dphi = p.phi(horizon) - p.phi(t);
    if dphi <= 0.0 {
        return Ok(1.0 / x_t);
    }
    Ok(nchi2_cdf(x_t.powf(q) / dphi, p.dimension() - 2.0, 0.0)? / x_t)
}
