//! Run configuration: JSON schema whose defaults are the reference
//! parameter set, so an empty override block reproduces the full
//! experiments.

use benchpricer_core::{Rate32Params, TcevParams};
use serde::{Deserialize, Serialize};

/// The experiments this driver knows how to reproduce.
pub const EXPERIMENTS: [&str; 8] = [
    "fig1-eur-put-rn-vs-rw",
    "fig2-call-surface-rmq-error",
    "fig3-bermudan-lsmc-vs-rmq",
    "fig4-zcb-rn-vs-rw",
    "fig5-hybrid-zcb-mc-vs-rmq",
    "fig6-correlation-sweep",
    "fig7-zcb-option-mc-vs-rmq",
    "fig8-zco-rn-vs-rw",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodSel {
    Analytic,
    Rmq,
    Mc,
    All,
}

impl MethodSel {
    pub fn wants_analytic(self) -> bool {
        matches!(self, MethodSel::Analytic | MethodSel::All)
    }
    pub fn wants_rmq(self) -> bool {
        matches!(self, MethodSel::Rmq | MethodSel::All)
    }
    pub fn wants_mc(self) -> bool {
        matches!(self, MethodSel::Mc | MethodSel::All)
    }
}

impl std::str::FromStr for MethodSel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(MethodSel::Analytic),
            "rmq" => Ok(MethodSel::Rmq),
            "mc" => Ok(MethodSel::Mc),
            "all" => Ok(MethodSel::All),
            other => Err(format!(
                "unknown method '{other}' (expected analytic|rmq|mc|all)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TcevConfig {
    pub alpha0: f64,
    pub eta: f64,
    pub c: f64,
    pub a: f64,
    pub x0: f64,
}

impl Default for TcevConfig {
    fn default() -> Self {
        TcevConfig {
            alpha0: 51.34,
            eta: 0.1239,
            c: 0.1010,
            a: 0.2868,
            x0: 50.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rate32Config {
    pub kappa: f64,
    pub theta: f64,
    pub sigma: f64,
    pub r0: f64,
}

impl Default for Rate32Config {
    fn default() -> Self {
        Rate32Config {
            kappa: 3.5726,
            theta: 0.096,
            sigma: 0.7960,
            r0: 0.05,
        }
    }
}

/// Discretization scheme behind the quantizer surrogate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Euler,
    Weak2,
}

/// Optional numerical settings; anything omitted falls back to the
/// reference setup of the selected experiment.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub scheme: Option<Scheme>,
    pub codewords: Option<usize>,
    pub rate_codewords: Option<usize>,
    pub gop_codewords: Option<usize>,
    pub steps_per_year: Option<usize>,
    pub paths: Option<usize>,
    pub lsmc_paths: Option<usize>,
    pub basis_degree: Option<usize>,
    pub seed: Option<u64>,
    pub antithetic: Option<bool>,
    pub rho: Option<f64>,
}

/// Optional grid overrides; defaults depend on the experiment.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Maturities in years.
    pub maturities: Option<Vec<f64>>,
    /// Strikes as fractions of the initial GOP (equity experiments).
    pub moneyness: Option<Vec<f64>>,
    /// Absolute strikes on the bond price (bond-option experiments).
    pub strikes: Option<Vec<f64>>,
    /// Correlation values for the sweep.
    pub rhos: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: String,
    #[serde(default)]
    pub tcev: TcevConfig,
    #[serde(default)]
    pub rate32: Rate32Config,
    /// Constant short rate of the fixed-rate experiments.
    #[serde(default = "default_short_rate")]
    pub short_rate: f64,
    #[serde(default = "default_method")]
    pub method: MethodSel,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub grids: GridConfig,
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn default_short_rate() -> f64 {
    0.05
}

fn default_method() -> MethodSel {
    MethodSel::All
}

/// Fully resolved numerical settings of one run.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub scheme: Scheme,
    pub codewords: usize,
    pub rate_codewords: usize,
    pub gop_codewords: usize,
    pub steps_per_year: usize,
    pub paths: usize,
    pub lsmc_paths: usize,
    pub basis_degree: usize,
    pub seed: u64,
    pub antithetic: bool,
    pub rho: f64,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, String> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !EXPERIMENTS.contains(&self.experiment.as_str()) {
            return Err(format!(
                "unknown experiment '{}'; registered: {}",
                self.experiment,
                EXPERIMENTS.join(", ")
            ));
        }
        self.tcev_params().map_err(|e| e.to_string())?;
        self.rate_params().map_err(|e| e.to_string())?;
        if let Some(rho) = self.numerics.rho {
            if !(rho.abs() < 1.0) {
                return Err(format!("|rho| = {} must be < 1", rho.abs()));
            }
        }
        for v in [
            &self.grids.maturities,
            &self.grids.moneyness,
            &self.grids.strikes,
        ]
        .into_iter()
        .flatten()
        {
            if v.is_empty() || v.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err("grid lists must be nonempty and nonnegative".into());
            }
        }
        Ok(())
    }

    pub fn tcev_params(&self) -> benchpricer_core::Result<TcevParams> {
        let t = &self.tcev;
        TcevParams::new(t.alpha0, t.eta, t.c, t.a, t.x0)
    }

    pub fn rate_params(&self) -> benchpricer_core::Result<Rate32Params> {
        let r = &self.rate32;
        Rate32Params::new(r.kappa, r.theta, r.sigma, r.r0)
    }

    /// Reference numerical setup of each experiment, overridden field by
    /// field from the config.
    pub fn resolve(&self) -> Resolved {
        let n = &self.numerics;
        // (scheme, N, N_r, N_x, steps/yr, paths, lsmc paths)
        let (scheme, cw, nr, nx, spy, paths, lsmc) = match self.experiment.as_str() {
            "fig2-call-surface-rmq-error" => (Scheme::Weak2, 50, 50, 150, 12, 100_000, 500_000),
            "fig3-bermudan-lsmc-vs-rmq" => (Scheme::Weak2, 100, 50, 150, 12, 100_000, 500_000),
            "fig5-hybrid-zcb-mc-vs-rmq" => (Scheme::Weak2, 50, 50, 150, 12, 100_000, 500_000),
            "fig6-correlation-sweep" => (Scheme::Weak2, 50, 30, 60, 6, 100_000, 500_000),
            "fig7-zcb-option-mc-vs-rmq" | "fig8-zco-rn-vs-rw" => {
                (Scheme::Weak2, 50, 50, 150, 12, 100_000, 500_000)
            }
            _ => (Scheme::Weak2, 50, 50, 150, 12, 100_000, 500_000),
        };
        Resolved {
            scheme: n.scheme.unwrap_or(scheme),
            codewords: n.codewords.unwrap_or(cw),
            rate_codewords: n.rate_codewords.unwrap_or(nr),
            gop_codewords: n.gop_codewords.unwrap_or(nx),
            steps_per_year: n.steps_per_year.unwrap_or(spy),
            paths: n.paths.unwrap_or(paths),
            lsmc_paths: n.lsmc_paths.unwrap_or(lsmc),
            basis_degree: n.basis_degree.unwrap_or(3),
            seed: n.seed.unwrap_or(42),
            antithetic: n.antithetic.unwrap_or(false),
            rho: n.rho.unwrap_or(0.0),
        }
    }
}
