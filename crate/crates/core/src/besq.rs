//! Squared Bessel process analytics: transition densities in the three
//! dimension regimes, absorbing-boundary distribution, the Schroder tail
//! identity, the CIR time change and the strict-local-martingale
//! expectation of the inverse power.
//!
//! The three regimes are governed by the dimension `delta`: for
//! `delta <= 0` zero is absorbing, for `0 < delta < 2` it can be absorbing
//! or reflecting, and for `delta > 2` it is unattainable. `delta == 2`
//! separates the regimes and is rejected everywhere.

use crate::error::{Error, Result};
use crate::specfun::{bessel_i_ln, nchi2_cdf, nchi2_pdf};

/// Boundary behaviour at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Absorbing,
    Reflecting,
    /// Zero unattainable (`delta > 2`); no condition may be specified.
    None,
}

/// A squared Bessel process specification.
#[derive(Debug, Clone, Copy)]
pub struct BesqSpec {
    pub delta: f64,
    pub x0: f64,
    pub boundary: Boundary,
}

impl BesqSpec {
    /// Validates the dimension/boundary pairing.
    pub fn new(delta: f64, x0: f64, boundary: Boundary) -> Result<Self> {
        if !(x0 >= 0.0) {
            return Err(Error::domain("BesqSpec", format!("x0 = {x0} must be >= 0")));
        }
        if delta == 2.0 {
            return Err(Error::domain("BesqSpec", "delta = 2 is not supported"));
        }
        match boundary {
            Boundary::None if delta < 2.0 => Err(Error::domain(
                "BesqSpec",
                "a boundary condition is required for delta < 2",
            )),
            Boundary::Reflecting if delta <= 0.0 || delta >= 2.0 => Err(Error::domain(
                "BesqSpec",
                "reflecting boundary requires 0 < delta < 2",
            )),
            Boundary::Absorbing if delta >= 2.0 => Err(Error::domain(
                "BesqSpec",
                "absorbing boundary requires delta < 2",
            )),
            _ => Ok(BesqSpec {
                delta,
                x0,
                boundary,
            }),
        }
    }
}

/// Cox-Ingersoll-Ross parameters for `dS = kappa (theta - S) dt + sigma sqrt(S) dW`.
#[derive(Debug, Clone, Copy)]
pub struct CirParams {
    pub kappa: f64,
    pub theta: f64,
    pub sigma: f64,
    pub s0: f64,
}

impl CirParams {
    pub fn new(kappa: f64, theta: f64, sigma: f64, s0: f64) -> Result<Self> {
        if !(kappa > 0.0 && theta > 0.0 && sigma > 0.0) {
            return Err(Error::domain(
                "CirParams",
                format!("kappa = {kappa}, theta = {theta}, sigma = {sigma} must all be > 0"),
            ));
        }
        if !(s0 >= 0.0) {
            return Err(Error::domain(
                "CirParams",
                format!("s0 = {s0} must be >= 0"),
            ));
        }
        Ok(CirParams {
            kappa,
            theta,
            sigma,
            s0,
        })
    }
}

fn check_transition(routine: &'static str, xt: f64, t: f64, x0: f64) -> Result<()> {
    if !(xt > 0.0) {
        return Err(Error::domain(routine, format!("xT = {xt} must be > 0")));
    }
    if !(t > 0.0) {
        return Err(Error::domain(routine, format!("T = {t} must be > 0")));
    }
    if !(x0 > 0.0) {
        return Err(Error::domain(routine, format!("x0 = {x0} must be > 0")));
    }
    Ok(())
}

/// Norm-decreasing transition density for `delta < 2` with an absorbing
/// boundary (the `delta <= 0` fundamental solution; the same expression
/// carries the absorbing sub-2 case):
///
/// `p(xT, T; x0) = (2T)^{-1} (xT/x0)^{(delta/2-1)/2} e^{-(xT+x0)/(2T)}
///                 I_{1-delta/2}(sqrt(xT x0)/T)`.
///
/// Its total mass is the staying-positive probability, strictly below one.
pub fn density_norm_decreasing(xt: f64, t: f64, x0: f64, delta: f64) -> Result<f64> {
    check_transition("density_norm_decreasing", xt, t, x0)?;
    if !(delta < 2.0) {
        return Err(Error::domain(
            "density_norm_decreasing",
            format!("delta = {delta} must be < 2"),
        ));
    }
    let ln_i = bessel_i_ln(1.0 - delta / 2.0, (xt * x0).sqrt() / t)?;
    let ln_p =
        -(2.0 * t).ln() + 0.25 * (delta - 2.0) * (xt.ln() - x0.ln()) - (xt + x0) / (2.0 * t) + ln_i;
    Ok(if ln_p < -745.0 { 0.0 } else { ln_p.exp() })
}

/// Norm-preserving transition density: the reflecting-boundary density for
/// `0 < delta < 2` and the unconstrained density for `delta > 2`. Equals
/// `(1/T) p_{chi'2}(xT/T; delta, x0/T)`.
pub fn density_reflecting(xt: f64, t: f64, x0: f64, delta: f64) -> Result<f64> {
    check_transition("density_reflecting", xt, t, x0)?;
    if !(delta > 0.0) {
        return Err(Error::domain(
            "density_reflecting",
            format!("delta = {delta} must be > 0"),
        ));
    }
    if delta == 2.0 {
        return Err(Error::domain(
            "density_reflecting",
            "delta = 2 is not supported",
        ));
    }
    Ok(nchi2_pdf(xt / t, delta, x0 / t)? / t)
}

/// Distribution function of the absorbed process (`delta < 2`), including
/// the Dirac mass at the origin:
/// `P(X_T <= xT | x0) = 1 - chi'2(x0/T; 2-delta, xT/T)`.
pub fn cdf_absorbing(xt: f64, t: f64, x0: f64, delta: f64) -> Result<f64> {
    if !(xt >= 0.0) {
        return Err(Error::domain(
            "cdf_absorbing",
            format!("xT = {xt} must be >= 0"),
        ));
    }
    check_transition("cdf_absorbing", f64::MAX, t, x0)?;
    if !(delta < 2.0) {
        return Err(Error::domain(
            "cdf_absorbing",
            format!("delta = {delta} must be < 2"),
        ));
    }
    Ok(1.0 - nchi2_cdf(x0 / t, 2.0 - delta, xt / t)?)
}

/// Tail mass of the norm-decreasing density over `[lower, inf)`:
/// `chi'2(x0/T; 2-delta, lower/T)` (Schroder's identity). At `lower = 0`
/// this is the staying-positive probability.
pub fn tail_integral_schroder(lower: f64, t: f64, x0: f64, delta: f64) -> Result<f64> {
    if !(lower >= 0.0) {
        return Err(Error::domain(
            "tail_integral_schroder",
            format!("lower = {lower} must be >= 0"),
        ));
    }
    check_transition("tail_integral_schroder", f64::MAX, t, x0)?;
    if !(delta < 2.0) {
        return Err(Error::domain(
            "tail_integral_schroder",
            format!("delta = {delta} must be < 2"),
        ));
    }
    nchi2_cdf(x0 / t, 2.0 - delta, lower / t)
}

/// Time change mapping a CIR process onto a squared Bessel process:
/// `S_t = e^{-kappa t} X_{phi(t)}` with `phi(t) = sigma^2 (e^{kappa t} - 1)/(4 kappa)`
/// and dimension `4 kappa theta / sigma^2`. Returns `(phi, scale, delta)`.
pub fn cir_time_change(p: &CirParams, t: f64) -> (f64, f64, f64) {
    let phi = p.sigma * p.sigma * ((p.kappa * t).exp() - 1.0) / (4.0 * p.kappa);
    let scale = (-p.kappa * t).exp();
    let delta = 4.0 * p.kappa * p.theta / (p.sigma * p.sigma);
    (phi, scale, delta)
}

/// `E[X_T^{1 - delta/2}]` for `delta > 2`: equals
/// `x0^{1-delta/2} chi'2(x0/T; delta-2, 0)`, strictly below `x0^{1-delta/2}`,
/// which makes the inverse power a strict local martingale.
pub fn power_local_martingale_expectation(x0: f64, t: f64, delta: f64) -> Result<f64> {
    if !(delta > 2.0) {
        return Err(Error::domain(
            "power_local_martingale_expectation",
            format!("delta = {delta} must be > 2"),
        ));
    }
    check_transition("power_local_martingale_expectation", f64::MAX, t, x0)?;
    Ok(x0.powf(1.0 - delta / 2.0) * nchi2_cdf(x0 / t, delta - 2.0, 0.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_to_inf};

    #[test]
    fn spec_boundary_rules() {
        assert!(BesqSpec::new(3.0, 1.0, Boundary::None).is_ok());
        assert!(BesqSpec::new(3.0, 1.0, Boundary::Reflecting).is_err());
        assert!(BesqSpec::new(1.5, 1.0, Boundary::Reflecting).is_ok());
        assert!(BesqSpec::new(1.5, 1.0, Boundary::Absorbing).is_ok());
        assert!(BesqSpec::new(1.5, 1.0, Boundary::None).is_err());
        assert!(BesqSpec::new(-0.5, 1.0, Boundary::Absorbing).is_ok());
        assert!(BesqSpec::new(-0.5, 1.0, Boundary::Reflecting).is_err());
        assert!(BesqSpec::new(2.0, 1.0, Boundary::None).is_err());
    }

    #[test]
    fn norm_decreasing_mass_is_staying_positive_probability() {
        // integral over (0, inf) equals chi'2(x0/T; 2-delta, 0) and is < 1
        for &(t, x0, delta) in &[(1.0, 1.0, 0.5), (1.2, 0.9, 0.3), (0.7, 2.0, -1.0)] {
            let mass = integrate_to_inf(
                |x| density_norm_decreasing(x, t, x0, delta).unwrap_or(0.0),
                1e-12,
                1e-11,
            );
            let expect = nchi2_cdf(x0 / t, 2.0 - delta, 0.0).unwrap();
            assert!((mass - expect).abs() < 1e-8, "t={t} x0={x0} delta={delta}");
            assert!(expect < 1.0);
        }
    }

    #[test]
    fn norm_decreasing_derived_value() {
        // Frozen from the direct formula checked against a fine-grid
        // Fokker-Planck solve (tests/besq_oracles.rs).
        let expect = 0.136_793_593_340_836;
        let got = density_norm_decreasing(1.0, 1.0, 1.0, 0.5).unwrap();
        assert!(((got - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn reflecting_density_normalizes() {
        for &(t, x0, delta) in &[(1.5, 1.0, 2.9), (1.0, 1.0, 3.402), (0.8, 0.5, 1.3)] {
            let mass = integrate_to_inf(
                |x| density_reflecting(x, t, x0, delta).unwrap_or(0.0),
                1e-12,
                1e-11,
            );
            assert!((mass - 1.0).abs() < 1e-8, "t={t} x0={x0} delta={delta}");
        }
    }

    #[test]
    fn reflecting_density_is_scaled_nchi2() {
        let (xt, t, x0, delta) = (2.0, 1.5, 1.0, 2.9);
        let lhs = density_reflecting(xt, t, x0, delta).unwrap();
        let rhs = nchi2_pdf(xt / t, delta, x0 / t).unwrap() / t;
        assert_eq!(lhs, rhs);
        // frozen from the CDF finite-difference oracle
        assert!((lhs - 0.133_865_164_735_591_7).abs() < 1e-10);
    }

    #[test]
    fn absorbing_cdf_has_atom_and_reaches_one() {
        let (t, x0, delta) = (1.0, 1.0, -1.0);
        let atom = cdf_absorbing(0.0, t, x0, delta).unwrap();
        let expect_atom = 1.0 - nchi2_cdf(x0 / t, 2.0 - delta, 0.0).unwrap();
        assert!((atom - expect_atom).abs() < 1e-14);
        assert!(atom > 0.0);
        assert!((cdf_absorbing(1e9, t, x0, delta).unwrap() - 1.0).abs() < 1e-12);
        // frozen Monte Carlo cross-check value (tests/besq_oracles.rs)
        let got = cdf_absorbing(1.0, 1.0, 1.0, -1.0).unwrap();
        assert!((got - 0.867_701_445_836_423_8).abs() < 1e-10);
    }

    #[test]
    fn schroder_identity_against_quadrature() {
        let (lower, t, x0, delta) = (0.7, 1.2, 0.9, 0.3);
        let tail = tail_integral_schroder(lower, t, x0, delta).unwrap();
        let quad = integrate(
            |x| density_norm_decreasing(x, t, x0, delta).unwrap(),
            lower,
            60.0,
            1e-12,
        );
        assert!((tail - quad).abs() < 1e-8, "{tail} vs {quad}");
        assert!((tail - 0.306_915_954_110_968_4).abs() < 1e-9);
        // lower = 0 reduces to the staying-positive probability
        let p0 = tail_integral_schroder(0.0, t, x0, delta).unwrap();
        assert_eq!(p0, nchi2_cdf(x0 / t, 2.0 - delta, 0.0).unwrap());
        // far tail vanishes
        assert!(tail_integral_schroder(1e6, t, x0, delta).unwrap() < 1e-12);
    }

    #[test]
    fn cir_time_change_values() {
        let p = CirParams::new(1.0, 0.5, 2.0, 0.3).unwrap();
        let (phi, scale, delta) = cir_time_change(&p, 0.0);
        assert_eq!(phi, 0.0);
        assert_eq!(scale, 1.0);
        assert!((delta - 4.0 * 1.0 * 0.5 / 4.0).abs() < 1e-15);
        // kappa = 1, sigma = 2, t = ln 2 gives phi = 1
        let (phi, _, _) = cir_time_change(&p, 2.0_f64.ln());
        assert!((phi - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cir_mean_via_mapped_density() {
        // E[S_t] = theta + (s0 - theta) e^{-kappa t} against quadrature of
        // the time-changed BESQ density
        let p = CirParams::new(1.3, 0.7, 0.9, 0.4).unwrap();
        let t = 0.8;
        let (phi, scale, delta) = cir_time_change(&p, t);
        let mean = integrate_to_inf(
            |x| x * density_reflecting(x, phi, p.s0, delta).unwrap_or(0.0),
            1e-12,
            1e-11,
        ) * scale;
        let expect = p.theta + (p.s0 - p.theta) * (-p.kappa * t).exp();
        assert!((mean - expect).abs() < 1e-7, "{mean} vs {expect}");
    }

    #[test]
    fn strict_local_martingale_expectation() {
        let (x0, t, delta) = (1.0, 1.0, 3.0);
        let v = power_local_martingale_expectation(x0, t, delta).unwrap();
        // frozen from quadrature of x^{1-delta/2} against the delta > 2 density
        assert!((v - 0.682_689_492_137_085_9).abs() < 1e-10);
        // below the initial value everywhere; strictly once the gap is
        // representable in double precision
        for &tt in &[0.01, 0.5, 2.0, 25.0] {
            let v = power_local_martingale_expectation(2.3, tt, 3.402).unwrap();
            let z0 = 2.3_f64.powf(1.0 - 3.402 / 2.0);
            assert!(v <= z0);
            if tt >= 0.5 {
                assert!(v < z0, "T = {tt}");
            }
        }
        // degenerate short horizon recovers the initial value
        let v0 = power_local_martingale_expectation(2.3, 1e-9, 3.402).unwrap();
        assert!((v0 / 2.3_f64.powf(1.0 - 3.402 / 2.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symmetry_relations_on_grid() {
        // X_T^{1-d/2} p_d(X_T,T;X_0) = X_0^{1-d/2} p_{4-d}(X_T,T;X_0)
        // and p_d(X_T,T;X_0) = p_{4-d}(X_0,T;X_T) for d > 2
        for &delta in &[2.5, 3.0, 3.4] {
            for i in 1..=50 {
                for j in 1..=50 {
                    let xt = 0.1 + 0.15 * i as f64;
                    let x0 = 0.1 + 0.15 * j as f64;
                    let t = 0.9;
                    let lhs =
                        xt.powf(1.0 - delta / 2.0) * density_reflecting(xt, t, x0, delta).unwrap();
                    let rhs = x0.powf(1.0 - delta / 2.0)
                        * density_norm_decreasing(xt, t, x0, 4.0 - delta).unwrap();
                    assert!(
                        ((lhs - rhs) / rhs).abs() < 1e-8,
                        "symmetry delta={delta} xt={xt} x0={x0}"
                    );
                    let lhs2 = density_reflecting(xt, t, x0, delta).unwrap();
                    let rhs2 = density_norm_decreasing(x0, t, xt, 4.0 - delta).unwrap();
                    assert!(
                        ((lhs2 - rhs2) / rhs2).abs() < 1e-8,
                        "transformation delta={delta} xt={xt} x0={x0}"
                    );
                }
            }
        }
    }

    #[test]
    fn chapman_kolmogorov_composition() {
        let (x0, delta) = (1.1, 3.402);
        let (t1, t2) = (0.6, 0.9);
        for &xt in &[0.4, 1.0, 2.5] {
            let composed = integrate_to_inf(
                |z| {
                    density_reflecting(z, t1, x0, delta).unwrap_or(0.0)
                        * density_reflecting(xt, t2, z, delta).unwrap_or(0.0)
                },
                1e-12,
                1e-10,
            );
            let direct = density_reflecting(xt, t1 + t2, x0, delta).unwrap();
            assert!((composed - direct).abs() < 1e-5, "xt = {xt}");
        }
    }

    #[test]
    fn no_atom_for_high_dimension() {
        // mass near the origin vanishes like eps^{delta/2} for delta > 2
        let delta = 3.0;
        let cdf_eps = |eps: f64| {
            integrate(
                |x| density_reflecting(x, 1.0, 1.0, delta).unwrap(),
                1e-300,
                eps,
                1e-16,
            )
        };
        let c = 2.0 * cdf_eps(1e-2) / 1e-2_f64.powf(delta / 2.0);
        for &eps in &[1e-3, 1e-4] {
            assert!(cdf_eps(eps) <= c * eps.powf(delta / 2.0));
        }
    }

    #[test]
    fn rejects_dimension_two() {
        assert!(density_reflecting(1.0, 1.0, 1.0, 2.0).is_err());
        assert!(density_norm_decreasing(1.0, 1.0, 1.0, 2.0).is_err());
    }
}
