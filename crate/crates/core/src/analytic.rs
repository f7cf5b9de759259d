//! Closed-form real-world prices: European puts and calls on the GOP under
//! a constant short rate, the fair zero-coupon bond and its decomposition
//! into a market-price-of-risk component and an interest-rate component,
//! the 3/2 bond function, and the hypothetical risk-neutral comparators.
//!
//! Everything is computed in discounted-GOP coordinates: the params' `x0`
//! is read as the discounted GOP observed at the valuation time and the
//! savings account converts to nominal prices at the boundary.

use crate::besq::density_norm_decreasing;
use crate::error::{Error, Result};
use crate::models::{Rate32Params, SavingsAccount, TcevParams};
use crate::quad::{integrate, integrate_to_inf};
use crate::specfun::{kummer_1f1, ln_gamma, nchi2_cdf};

/// Exercise style of a vanilla option.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionKind {
    Put,
    Call,
}

/// A European option contract on the GOP.
#[derive(Debug, Clone, Copy)]
pub struct EuropeanSpec {
    /// Valuation time.
    pub t: f64,
    /// Expiry.
    pub expiry: f64,
    /// Strike on the (undiscounted) GOP.
    pub strike: f64,
    pub kind: OptionKind,
}

impl EuropeanSpec {
    pub fn new(t: f64, expiry: f64, strike: f64, kind: OptionKind) -> Result<Self> {
        if !(expiry > t) {
            return Err(Error::domain(
                "EuropeanSpec",
                format!("expiry {expiry} must exceed valuation time {t}"),
            ));
        }
        if !(strike >= 0.0) {
            return Err(Error::domain(
                "EuropeanSpec",
                format!("strike {strike} must be >= 0"),
            ));
        }
        Ok(EuropeanSpec {
            t,
            expiry,
            strike,
            kind,
        })
    }
}

/// Ingredients shared by the put/call/bond formulas.
struct Coords {
    xbar: f64,
    beta_t: f64,
    disc: f64,
    k_tilde: f64,
    dphi: f64,
    x: f64,
    delta: f64,
}

fn coords(p: &TcevParams, r: f64, t: f64, expiry: f64, strike: f64) -> Result<Coords> {
    if !(expiry > t) {
        return Err(Error::domain(
            "analytic",
            format!("expiry {expiry} must exceed valuation time {t}"),
        ));
    }
    let beta = SavingsAccount::new(r);
    let q = p.besq_exponent();
    let dphi = p.phi(expiry) - p.phi(t);
    Ok(Coords {
        xbar: p.x0,
        beta_t: beta.beta(t),
        disc: beta.discount(t, expiry),
        k_tilde: (strike / beta.beta(expiry)).powf(q),
        dphi,
        x: p.x0.powf(q) / dphi,
        delta: p.dimension(),
    })
}

/// Real-world price of a European put on the GOP (two-term noncentral
/// chi-squared formula).
pub fn real_world_put(p: &TcevParams, r: f64, spec: &EuropeanSpec) -> Result<f64> {
    if spec.kind != OptionKind::Put {
        return Err(Error::domain("real_world_put", "spec.kind must be Put"));
    }
    if spec.strike == 0.0 {
        return Ok(0.0);
    }
    let c = coords(p, r, spec.t, spec.expiry, spec.strike)?;
    let term_gop = c.xbar * c.beta_t * nchi2_cdf(c.k_tilde / c.dphi, c.delta, c.x)?;
    let stays = nchi2_cdf(c.x, c.delta - 2.0, 0.0)?;
    let hit = nchi2_cdf(c.x, c.delta - 2.0, c.k_tilde / c.dphi)?;
    Ok(spec.strike * c.disc * (stays - hit) - term_gop)
}

/// Real-world price of a European call on the GOP.
pub fn real_world_call(p: &TcevParams, r: f64, spec: &EuropeanSpec) -> Result<f64> {
    if spec.kind != OptionKind::Call {
        return Err(Error::domain("real_world_call", "spec.kind must be Call"));
    }
    let c = coords(p, r, spec.t, spec.expiry, spec.strike)?;
    if spec.strike == 0.0 {
        return Ok(c.xbar * c.beta_t);
    }
    let in_money = 1.0 - nchi2_cdf(c.k_tilde / c.dphi, c.delta, c.x)?;
    let hit = nchi2_cdf(c.x, c.delta - 2.0, c.k_tilde / c.dphi)?;
    Ok(c.xbar * c.beta_t * in_money - spec.strike * c.disc * hit)
}

/// Fair (real-world) zero-coupon bond under a constant short rate:
/// `beta(t)/beta(T) chi'2(xbar^{2(1-a)}/dphi; delta-2, 0)`, strictly below
/// the classical discount factor.
pub fn fair_zcb_constant_rate(p: &TcevParams, r: f64, t: f64, expiry: f64) -> Result<f64> {
    let beta = SavingsAccount::new(r);
    Ok(beta.discount(t, expiry) * mpor_component(p, t, expiry)?)
}

/// Market-price-of-risk component of the fair bond: the probability that
/// the inverse discounted GOP stays positive, `chi'2(x; delta-2, 0)`.
/// Decreases from one toward zero as the horizon grows.
pub fn mpor_component(p: &TcevParams, t: f64, expiry: f64) -> Result<f64> {
    mpor_component_state(p, p.x0, t, expiry)
}

/// [`mpor_component`] evaluated at an arbitrary discounted-GOP state
/// `xbar` observed at time `t`; the form needed on grid nodes and along
/// simulated paths.
pub fn mpor_component_state(p: &TcevParams, xbar: f64, t: f64, expiry: f64) -> Result<f64> {
    if !(expiry >= t) {
        return Err(Error::domain(
            "mpor_component",
            format!("expiry {expiry} must be >= t {t}"),
        ));
    }
    if !(xbar > 0.0) {
        return Err(Error::domain(
            "mpor_component",
            format!("xbar = {xbar} must be > 0"),
        ));
    }
    let dphi = p.phi(expiry) - p.phi(t);
    if dphi == 0.0 {
        return Ok(1.0);
    }
    nchi2_cdf(
        xbar.powf(p.besq_exponent()) / dphi,
        p.dimension() - 2.0,
        0.0,
    )
}

/// Kummer-function parameters of the 3/2 bond function, precomputed once
/// per rate parameter set. The time- and state-dependent argument
/// `x(r, t, T)` is the only per-call quantity.
#[derive(Debug, Clone, Copy)]
pub struct KummerBondParams {
    pub alpha_k: f64,
    pub gamma_k: f64,
    pub phi_k: f64,
    kappa_theta: f64,
    sigma_sq: f64,
    /// `ln Gamma(alpha - gamma) - ln Gamma(alpha)`.
    ln_gamma_ratio: f64,
}

impl KummerBondParams {
    pub fn new(p: &Rate32Params) -> Result<Self> {
        let sigma_sq = p.sigma * p.sigma;
        let phi_k = p.kappa + 0.5 * sigma_sq;
        let gamma_k = ((phi_k * phi_k + 2.0 * sigma_sq).sqrt() - phi_k) / sigma_sq;
        let alpha_k = 2.0 / sigma_sq * (p.kappa + (1.0 + gamma_k) * sigma_sq);
        if !(alpha_k - gamma_k > 0.0) {
            return Err(Error::domain(
                "KummerBondParams",
                format!("alpha - gamma = {} must be > 0", alpha_k - gamma_k),
            ));
        }
        Ok(KummerBondParams {
            alpha_k,
            gamma_k,
            phi_k,
            kappa_theta: p.kappa * p.theta,
            sigma_sq,
            ln_gamma_ratio: ln_gamma(alpha_k - gamma_k)? - ln_gamma(alpha_k)?,
        })
    }

    /// `x(r, t, T) = 2 kappa theta / (sigma^2 (e^{kappa theta (T-t)} - 1) r)`.
    pub fn x_of(&self, r: f64, t: f64, expiry: f64) -> f64 {
        2.0 * self.kappa_theta
            / (self.sigma_sq * ((self.kappa_theta * (expiry - t)).exp() - 1.0) * r)
    }

    /// The bond function
    /// `G = Gamma(alpha-gamma)/Gamma(alpha) x^gamma 1F1(gamma, alpha, -x)`.
    pub fn g(&self, r: f64, t: f64, expiry: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain(
                "ir_component_32",
                format!("r = {r} must be > 0"),
            ));
        }
        if !(expiry > t) {
            return Err(Error::domain(
                "ir_component_32",
                format!("expiry {expiry} must exceed t {t}"),
            ));
        }
        let x = self.x_of(r, t, expiry);
        let f = kummer_1f1(self.gamma_k, self.alpha_k, -x)?;
        Ok((self.ln_gamma_ratio + self.gamma_k * x.ln()).exp() * f)
    }
}

/// Interest-rate component of the fair bond under the 3/2 short rate:
/// `E[exp(-int_t^T r ds)]` in closed form.
pub fn ir_component_32(p: &Rate32Params, t: f64, expiry: f64) -> Result<f64> {
    KummerBondParams::new(p)?.g(p.r0, t, expiry)
}

/// Fair zero-coupon bond in the hybrid model at zero correlation:
/// product of the MPOR and IR components.
pub fn hybrid_zcb(p_tcev: &TcevParams, p_rate: &Rate32Params, t: f64, expiry: f64) -> Result<f64> {
    if expiry == t {
        return Ok(1.0);
    }
    Ok(mpor_component(p_tcev, t, expiry)? * ir_component_32(p_rate, t, expiry)?)
}

/// Hypothetical risk-neutral call price. For a positive strike this equals
/// the real-world call, because the candidate measure change only reweights
/// paths near zero, which the call integral never sees. Evaluated through
/// the sub-two-dimensional dynamics (`rn_dimension`) as an independent
/// route: quadrature of the payoff against the norm-decreasing density plus
/// the Schroder tail.
pub fn rn_call(p: &TcevParams, r: f64, spec: &EuropeanSpec) -> Result<f64> {
    if spec.kind != OptionKind::Call {
        return Err(Error::domain("rn_call", "spec.kind must be Call"));
    }
    if !(spec.strike > 0.0) {
        return Err(Error::domain(
            "rn_call",
            "the call-equivalence route requires strike > 0",
        ));
    }
    let beta = SavingsAccount::new(r);
    let q = p.besq_exponent();
    let d_rn = p.rn_dimension();
    let dphi = p.phi(spec.expiry) - p.phi(spec.t);
    let y = p.x0.powf(q);
    let k_disc = spec.strike / beta.beta(spec.expiry);
    let k_tilde = k_disc.powf(q);

    // tail probability of ending above the strike under the absorbed dynamics
    let tail = nchi2_cdf(y / dphi, 2.0 - d_rn, k_tilde / dphi)?;

    // E[X^{1/q} 1{X > k_tilde}] against the norm-decreasing density
    let f = |x: f64| x.powf(1.0 / q) * density_norm_decreasing(x, dphi, y, d_rn).unwrap_or(0.0);
    let mean = y + d_rn * dphi;
    let sd = (2.0 * d_rn * dphi * dphi + 4.0 * y * dphi).sqrt();
    let hi = (mean + 60.0 * sd).max(k_tilde * 2.0);
    let scale = p.x0.max(1.0);
    let gop_term =
        integrate(f, k_tilde, hi, 1e-11 * scale) + integrate_to_inf(f, hi, 1e-11 * scale);

    Ok(beta.beta(spec.t) * (gop_term - k_disc * tail))
}

/// Hypothetical risk-neutral put price via classical put-call parity,
/// `rn_put = rn_call - S_t + K beta(t)/beta(T)`. Exceeds the real-world
/// put, increasingly so for long horizons.
pub fn rn_put(p: &TcevParams, r: f64, spec: &EuropeanSpec) -> Result<f64> {
    if spec.kind != OptionKind::Put {
        return Err(Error::domain("rn_put", "spec.kind must be Put"));
    }
    let beta = SavingsAccount::new(r);
    let call_spec = EuropeanSpec {
        kind: OptionKind::Call,
        ..*spec
    };
    let call = rn_call(p, r, &call_spec)?;
    Ok(call - p.x0 * beta.beta(spec.t) + spec.strike * beta.discount(spec.t, spec.expiry))
}
