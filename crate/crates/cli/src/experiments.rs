//! The eight registered experiments, each producing one CSV table.

use crate::config::{Resolved, RunConfig, Scheme};
use crate::output::Table;
use benchpricer_core::analytic::{
    self, hybrid_zcb, ir_component_32, mpor_component, EuropeanSpec, OptionKind,
};
use benchpricer_core::montecarlo::{
    mc_bermudan_lsmc_strip, mc_european, mc_hybrid_zcb_curve, mc_zcb_option_strip, McConfig,
};
use benchpricer_core::pricers::{
    bermudan_price_rmq, european_price_rmq, hybrid_zcb_curve_rmq, rn_bond_option_comparators,
    zcb_option_price_rmq, BondOptionSpec,
};
use benchpricer_core::quantize::{joint_rmq_build, rmq_build, GaussianSurrogate, JointQuantGrid};
use benchpricer_core::{PriceResult, Rate32Params, TcevParams};

/// Failures split by exit-code class.
pub enum RunError {
    /// Configuration inconsistency detected before computing (exit 2).
    Config(String),
    /// Numerical failure while computing (exit 3).
    Numerical(String),
}

impl From<benchpricer_core::Error> for RunError {
    fn from(e: benchpricer_core::Error) -> Self {
        RunError::Numerical(e.to_string())
    }
}

type RunResult = Result<Table, RunError>;

fn gop_surrogate(scheme: Scheme, p: &TcevParams) -> GaussianSurrogate {
    match scheme {
        Scheme::Euler => GaussianSurrogate::tcev_euler(p),
        Scheme::Weak2 => GaussianSurrogate::tcev_weak2(p),
    }
}

fn rate_surrogate(scheme: Scheme, p: &Rate32Params) -> GaussianSurrogate {
    match scheme {
        Scheme::Euler => GaussianSurrogate::rate32_euler(p),
        Scheme::Weak2 => GaussianSurrogate::rate32_weak2(p),
    }
}

fn monthly(from_month: usize, to_month: usize) -> Vec<f64> {
    (from_month..=to_month).map(|m| m as f64 / 12.0).collect()
}

/// Maturities must sit on the quantizer grid.
fn check_on_grid(maturities: &[f64], steps_per_year: usize) -> Result<(), RunError> {
    for &t in maturities {
        let steps = t * steps_per_year as f64;
        if (steps - steps.round()).abs() > 1e-9 || t <= 0.0 {
            return Err(RunError::Config(format!(
                "maturity {t} is not a grid time at {steps_per_year} steps/year"
            )));
        }
    }
    Ok(())
}

fn mc_config(res: &Resolved, paths: usize) -> Result<McConfig, RunError> {
    McConfig::new(paths, res.steps_per_year.max(6), res.seed, res.antithetic)
        .map_err(|e| RunError::Config(e.to_string()))
}

pub fn run(cfg: &RunConfig) -> RunResult {
    let res = cfg.resolve();
    match cfg.experiment.as_str() {
        "fig1-eur-put-rn-vs-rw" => fig1(cfg, &res),
        "fig2-call-surface-rmq-error" => fig2(cfg, &res),
        "fig3-bermudan-lsmc-vs-rmq" => fig3(cfg, &res),
        "fig4-zcb-rn-vs-rw" => fig4(cfg),
        "fig5-hybrid-zcb-mc-vs-rmq" => fig5(cfg, &res),
        "fig6-correlation-sweep" => fig6(cfg, &res),
        "fig7-zcb-option-mc-vs-rmq" => fig7(cfg, &res),
        "fig8-zco-rn-vs-rw" => fig8(cfg, &res),
        other => Err(RunError::Config(format!("unknown experiment {other}"))),
    }
}

/// Risk-neutral against real-world at-the-money puts across maturities.
fn fig1(cfg: &RunConfig, res: &Resolved) -> RunResult {
    let p = cfg.tcev_params()?;
    let maturities = cfg
        .grids
        .maturities
        .clone()
        .unwrap_or_else(|| (30..=90).map(|k| k as f64 / 6.0).collect());
    let strike = cfg.grids.moneyness.as_ref().map_or(1.0, |m| m[0]) * p.x0;

    let mut cols = vec!["maturity", "strike"];
    if cfg.method.wants_analytic() {
        cols.extend(["rw_put", "rn_put", "gap_pct"]);
    }
    if cfg.method.wants_mc() {
        cols.extend(["mc_put", "mc_se"]);
    }
    let mut table = Table::new(cols);
    for &t in &maturities {
        let spec = EuropeanSpec::new(0.0, t, strike, OptionKind::Put)
            .map_err(|e| RunError::Config(e.to_string()))?;
        let mut row = vec![t, strike];
        if cfg.method.wants_analytic() {
            let rw = analytic::real_world_put(&p, cfg.short_rate, &spec)?;
            let rn = analytic::rn_put(&p, cfg.short_rate, &spec)?;
            row.extend([rw, rn, (rn - rw) / rn * 100.0]);
        }
        if cfg.method.wants_mc() {
            let started = std::time::Instant::now();
            let est = mc_european(&p, cfg.short_rate, &spec, &mc_config(res, res.paths)?)?;
            let priced = PriceResult::stochastic(est.mean, est.std_error, started.elapsed());
            row.extend([priced.value, priced.std_error.unwrap_or(0.0)]);
        }
        table.push(row);
    }
    Ok(table)
}

/// European call surface: analytic against the quantized price.
fn fig2(cfg: &RunConfig, res: &Resolved) -> RunResult {
    let p = cfg.tcev_params()?;
    let maturities = cfg
        .grids
        .maturities
        .clone()
        .unwrap_or_else(|| monthly(120, 180));
    let moneyness = cfg
        .grids
        .moneyness
        .clone()
        .unwrap_or_else(|| (0..9).map(|j| 0.8 + 0.05 * j as f64).collect());
    check_on_grid(&maturities, res.steps_per_year)?;

    let grid = if cfg.method.wants_rmq() {
        let horizon = maturities.iter().cloned().fold(0.0, f64::max);
        Some(rmq_build(
            &gop_surrogate(res.scheme, &p),
            p.x0,
            horizon,
            res.steps_per_year,
            res.codewords,
        )?)
    } else {
        None
    };

    let mut cols = vec!["maturity", "strike"];
    if cfg.method.wants_analytic() {
        cols.push("analytic");
    }
    if cfg.method.wants_rmq() {
        cols.push("rmq");
    }
    if cfg.method.wants_analytic() && cfg.method.wants_rmq() {
        cols.push("rel_err_pct");
    }
    let mut table = Table::new(cols);
    for &t in &maturities {
        for &m in &moneyness {
            let spec = EuropeanSpec::new(0.0, t, m * p.x0, OptionKind::Call)
                .map_err(|e| RunError::Config(e.to_string()))?;
            let mut row = vec![t, m * p.x0];
            let ana = if cfg.method.wants_analytic() {
                let v = analytic::real_world_call(&p, cfg.short_rate, &spec)?;
                row.push(v);
                Some(v)
            } else {
                None
            };
            if let Some(g) = &grid {
                let v = european_price_rmq(g, &p, cfg.short_rate, &spec)?;
                row.push(v);
                if let Some(a) = ana {
                    row.push((v - a) / a * 100.0);
                }
            }
            table.push(row);
        }
    }
    Ok(table)
}

/// Bermudan puts: backward induction on the grid against LSMC.
fn fig3(cfg: &RunConfig, res: &Resolved) -> RunResult {
    let p = cfg.tcev_params()?;
    let dates = cfg
        .grids
        .maturities
        .clone()
        .unwrap_or_else(|| monthly(1, 60));
    let strikes: Vec<f64> = cfg
        .grids
        .moneyness
        .clone()
        .unwrap_or_else(|| (0..9).map(|j| 0.8 + 0.05 * j as f64).collect())
        .iter()
        .map(|m| m * p.x0)
        .collect();
    check_on_grid(&dates, res.steps_per_year)?;
    let horizon = dates.iter().cloned().fold(0.0, f64::max);

    let grid = if cfg.method.wants_rmq() {
        Some(rmq_build(
            &gop_surrogate(res.scheme, &p),
            p.x0,
            horizon,
            res.steps_per_year,
            res.codewords,
        )?)
    } else {
        None
    };
    let lsmc = if cfg.method.wants_mc() {
        Some(mc_bermudan_lsmc_strip(
            &p,
            cfg.short_rate,
            &dates,
            &strikes,
            OptionKind::Put,
            &mc_config(res, res.lsmc_paths)?,
            res.basis_degree,
        )?)
    } else {
        None
    };

    let mut cols = vec!["strike"];
    if grid.is_some() {
        cols.push("rmq");
    }
    if lsmc.is_some() {
        cols.extend(["lsmc", "lsmc_se"]);
    }
    if grid.is_some() && lsmc.is_some() {
        cols.push("rel_diff_pct");
    }
    let mut table = Table::new(cols);
    for (i, &k) in strikes.iter().enumerate() {
        let mut row = vec![k];
        let rmq_v = if let Some(g) = &grid {
            let spec =
                benchpricer_core::pricers::BermudanSpec::new(dates.clone(), k, OptionKind::Put)
                    .map_err(|e| RunError::Config(e.to_string()))?;
            let v = bermudan_price_rmq(g, &p, cfg.short_rate, &spec)?;
            row.push(v);
            Some(v)
        } else {
            None
        };
        if let Some(l) = &lsmc {
            row.extend([l[i].mean, l[i].std_error]);
            if let Some(v) = rmq_v {
                row.push((v - l[i].mean) / l[i].mean * 100.0);
            }
        }
        table.push(row);
    }
    Ok(table)
}

/// Fair bond decomposition and the risk-neutral comparison (analytic).
fn fig4(cfg: &RunConfig) -> RunResult {
    let p = cfg.tcev_params()?;
    let pr = cfg.rate_params()?;
    let maturities = cfg
        .grids
        .maturities
        .clone()
        .unwrap_or_else(|| monthly(1, 180));
    let mut table = Table::new(vec!["maturity", "mpor", "ir", "fair", "rn", "gap_pct"]);
    for &t in &maturities {
        let m = mpor_component(&p, 0.0, t)?;
        let g = ir_component_32(&pr, 0.0, t)?;
        table.push(vec![t, m, g, m * g, g, (1.0 - m) * 100.0]);
    }
    Ok(table)
}

fn build_joint(
    cfg: &RunConfig,
    res: &Resolved,
    rho: f64,
    horizon: f64,
) -> Result<JointQuantGrid, RunError> {
    let p = cfg.tcev_params()?;
    let pr = cfg.rate_params()?;
    Ok(joint_rmq_build(
        &rate_surrogate(res.scheme, &pr),
        &gop_surrogate(res.scheme, &p),
        rho,
        pr.r0,
        p.x0,
        horizon,
        res.steps_per_year,
        res.rate_codewords,
        res.gop_codewords,
    )?)
}

/// Hybrid fair-bond curve: analytic, quantized and Monte Carlo.
fn fig5(cfg: &RunConfig, res: &Resolved) -> RunResult {
    let p = cfg.tcev_params()?;
    let pr = cfg.rate_params()?;
    let horizon = cfg
        .grids
        .maturities
        .as_ref()
        .map_or(15.0, |m| m.iter().cloned().fold(0.0, f64::max));
    check_on_grid(&[horizon], res.steps_per_year)?;

    let rmq_curve = if cfg.method.wants_rmq() {
        let jg = build_joint(cfg, res, res.rho, horizon)?;
        Some(hybrid_zcb_curve_rmq(&jg, horizon)?)
    } else {
        None
    };
    let mc_curve = if cfg.method.wants_mc() {
        Some(mc_hybrid_zcb_curve(
            &pr,
            &p,
            horizon,
            &mc_config(res, res.paths)?,
        )?)
    } else {
        None
    };

    // output at quantizer grid times (or monthly when only MC runs)
    let marks: Vec<f64> = match (&rmq_curve, &mc_curve) {
        (Some(c), _) => c.iter().map(|&(t, _)| t).collect(),
        (None, Some(c)) => c.iter().map(|&(t, _)| t).collect(),
        (None, None) => monthly(1, (horizon * 12.0).round() as usize),
    };

    let mut cols = vec!["maturity"];
    if cfg.method.wants_analytic() {
        cols.push("analytic");
    }
    if rmq_curve.is_some() {
        cols.push("rmq");
    }
    if mc_curve.is_some() {
        cols.extend(["mc", "mc_se"]);
    }
    let mut table = Table::new(cols);
    for &t in &marks {
        let mut row = vec![t];
        if cfg.method.wants_analytic() {
            row.push(hybrid_zcb(&p, &pr, 0.0, t)?);
        }
        if let Some(c) = &rmq_curve {
            if let Some(&(_, v)) = c.iter().find(|(tc, _)| (tc - t).abs() < 1e-9) {
                row.push(v);
            } else {
                continue;
            }
        }
        if let Some(c) = &mc_curve {
            match c.iter().find(|(tc, _)| (tc - t).abs() < 1e-9) {
                Some((_, est)) => row.extend([est.mean, est.std_error]),
                None => continue,
            }
        }
        table.push(row);
    }
    Ok(table)
}

/// Correlation sweep of the quantized fair-bond curve.
fn fig6(cfg: &RunConfig, res: &Resolved) -> RunResult {
    let horizon = cfg
        .grids
        .maturities
        .as_ref()
        .map_or(15.0, |m| m.iter().cloned().fold(0.0, f64::max));
    check_on_grid(&[horizon], res.steps_per_year)?;
    let rhos = cfg
        .grids
        .rhos
        .clone()
        .unwrap_or_else(|| vec![-0.9, -0.7, -0.5, -0.3, 0.0, 0.3, 0.5, 0.7, 0.9]);
    for &rho in &rhos {
        if !(rho.abs() < 1.0) {
            return Err(RunError::Config(format!(
                "|rho| = {} must be < 1",
                rho.abs()
            )));
        }
    }

    let base_curve = {
        let jg = build_joint(cfg, res, 0.0, horizon)?;
        hybrid_zcb_curve_rmq(&jg, horizon)?
    };
    let mut table = Table::new(vec!["rho", "maturity", "price", "dev_vs_rho0_pct"]);
    for &rho in &rhos {
        let curve = if rho == 0.0 {
            base_curve.clone()
        } else {
            let jg = build_joint(cfg, res, rho, horizon)?;
            hybrid_zcb_curve_rmq(&jg, horizon)?
        };
        for (&(t, v), &(_, v0)) in curve.iter().zip(&base_curve) {
            table.push(vec![rho, t, v, (v - v0) / v0 * 100.0]);
        }
    }
    Ok(table)
}

fn bond_option_frame(
    cfg: &RunConfig,
    default_expiry: f64,
    default_bond: f64,
) -> Result<(f64, f64, Vec<f64>), RunError> {
    let p = cfg.tcev_params()?;
    let pr = cfg.rate_params()?;
    let (t_opt, t_bond) = match cfg.grids.maturities.as_deref() {
        Some([a, b]) if b > a && *a > 0.0 => (*a, *b),
        Some(_) => {
            return Err(RunError::Config(
                "bond-option experiments take maturities = [option expiry, bond maturity]".into(),
            ))
        }
        None => (default_expiry, default_bond),
    };
    let strikes = match &cfg.grids.strikes {
        Some(s) => s.clone(),
        None => {
            // 20 strikes centered at the fair forward bond
            let fwd = hybrid_zcb(&p, &pr, 0.0, t_bond)? / hybrid_zcb(&p, &pr, 0.0, t_opt)?;
            (0..20)
                .map(|i| fwd * (0.90 + 0.20 * i as f64 / 19.0))
                .collect()
        }
    };
    Ok((t_opt, t_bond, strikes))
}

/// Puts on the fair bond: quantized against Monte Carlo.
fn fig7(cfg: &RunConfig, res: &Resolved) -> RunResult {
    let p = cfg.tcev_params()?;
    let pr = cfg.rate_params()?;
    let (t_opt, t_bond, strikes) = bond_option_frame(cfg, 10.0, 15.0)?;
    check_on_grid(&[t_opt], res.steps_per_year)?;

    let jg = if cfg.method.wants_rmq() {
        Some(build_joint(cfg, res, res.rho, t_opt)?)
    } else {
        None
    };
    let mc = if cfg.method.wants_mc() {
        Some(mc_zcb_option_strip(
            &pr,
            &p,
            t_opt,
            t_bond,
            &strikes,
            &mc_config(res, res.paths)?,
        )?)
    } else {
        None
    };

    let mut cols = vec!["strike"];
    if jg.is_some() {
        cols.push("rmq");
    }
    if mc.is_some() {
        cols.extend(["mc", "mc_se"]);
    }
    if jg.is_some() && mc.is_some() {
        cols.push("rel_gap_pct");
    }
    let mut table = Table::new(cols);
    for (i, &k) in strikes.iter().enumerate() {
        let mut row = vec![k];
        let rmq_v = if let Some(g) = &jg {
            let spec = BondOptionSpec::new(t_opt, t_bond, k)
                .map_err(|e| RunError::Config(e.to_string()))?;
            let v = zcb_option_price_rmq(g, &pr, &p, &spec)?;
            row.push(v);
            Some(v)
        } else {
            None
        };
        if let Some(mcs) = &mc {
            row.extend([mcs[i].mean, mcs[i].std_error]);
            if let Some(v) = rmq_v {
                row.push((v - mcs[i].mean) / mcs[i].mean * 100.0);
            }
        }
        table.push(row);
    }
    Ok(table)
}

/// Real-world against risk-neutral bond options (quantized).
fn fig8(cfg: &RunConfig, res: &Resolved) -> RunResult {
    let p = cfg.tcev_params()?;
    let pr = cfg.rate_params()?;
    let (t_opt, t_bond, strikes) = bond_option_frame(cfg, 5.0, 10.0)?;
    check_on_grid(&[t_opt], res.steps_per_year)?;
    let jg = build_joint(cfg, res, res.rho, t_opt)?;

    let mut table = Table::new(vec!["strike", "rw_put", "rn_put", "rw_call", "rn_call"]);
    for &k in &strikes {
        let spec =
            BondOptionSpec::new(t_opt, t_bond, k).map_err(|e| RunError::Config(e.to_string()))?;
        let (rw_put, rn_put, rw_call, rn_call) = rn_bond_option_comparators(&jg, &pr, &p, &spec)?;
        table.push(vec![k, rw_put, rn_put, rw_call, rn_call]);
    }
    Ok(table)
}
