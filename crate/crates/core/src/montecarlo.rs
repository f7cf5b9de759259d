//! Monte Carlo reference engines: exact long-step sampling of the
//! discounted GOP, Euler simulation of the 3/2 short rate, least-squares
//! Monte Carlo for Bermudan exercise, and standard-error reporting.
//!
//! Work is split into fixed-size path batches; each batch draws from its
//! own generator seeded deterministically from the configured seed, and
//! batch statistics merge in batch order, so estimates are reproducible
//! bit for bit regardless of the worker count.

use crate::analytic::{mpor_component_state, KummerBondParams, OptionKind};
use crate::error::{Error, Result};
use crate::models::{Rate32Params, SavingsAccount, TcevParams};
use crate::pricers::{BermudanSpec, BondOptionSpec};
use crate::EuropeanSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

const BATCH: usize = 8192;
/// Reflect-at-floor level for Euler paths of strictly positive processes.
const EULER_FLOOR: f64 = 1e-8;

/// Monte Carlo run configuration.
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub paths: usize,
    pub steps_per_year: usize,
    pub seed: u64,
    pub antithetic: bool,
}

impl McConfig {
    pub fn new(paths: usize, steps_per_year: usize, seed: u64, antithetic: bool) -> Result<Self> {
        if paths < 2 {
            return Err(Error::domain("McConfig", "paths must be >= 2"));
        }
        if steps_per_year == 0 {
            return Err(Error::domain("McConfig", "steps_per_year must be >= 1"));
        }
        Ok(McConfig {
            paths,
            steps_per_year,
            seed,
            antithetic,
        })
    }
}

/// A Monte Carlo estimate. `paths` counts the independent samples behind
/// the standard error (antithetic pairs count once).
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub paths: usize,
}

impl McEstimate {
    /// Scales the estimate by a deterministic factor.
    fn scaled(self, f: f64) -> Self {
        McEstimate {
            mean: f * self.mean,
            std_error: f.abs() * self.std_error,
            paths: self.paths,
        }
    }
}

fn batch_seed(seed: u64, batch: u64) -> u64 {
    // splitmix64 of the batch index, offset by the run seed
    let mut z = seed.wrapping_add(batch.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Default)]
struct BatchStats {
    n: usize,
    mean: f64,
    m2: f64,
}

impl BatchStats {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, other: BatchStats) -> BatchStats {
        if other.n == 0 {
            return self;
        }
        if self.n == 0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        BatchStats {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * self.n as f64 * other.n as f64 / n as f64,
        }
    }

    fn estimate(self) -> McEstimate {
        let var = if self.n > 1 {
            self.m2 / (self.n - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error: (var / self.n as f64).sqrt(),
            paths: self.n,
        }
    }
}

/// Runs `samples` evaluations of `one(rng)` in deterministic batches.
fn batched_mean<F>(samples: usize, seed: u64, one: F) -> McEstimate
where
    F: Fn(&mut ChaCha12Rng) -> f64 + Sync,
{
    let n_batches = samples.div_ceil(BATCH);
    (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha12Rng::seed_from_u64(batch_seed(seed, b as u64));
            let count = BATCH.min(samples - b * BATCH);
            let mut stats = BatchStats::default();
            for _ in 0..count {
                stats.push(one(&mut rng));
            }
            stats
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(BatchStats::default(), BatchStats::merge)
        .estimate()
}

/// Quantile of the noncentral chi-squared law by safeguarded Newton on
/// the CDF, bisection fallback inside a maintained bracket.
fn nchi2_quantile(u: f64, k: f64, lambda: f64) -> f64 {
    use crate::specfun::{nchi2_cdf, nchi2_pdf};
    let mut lo = 0.0_f64;
    let mut hi = k + lambda + 40.0 * (2.0 * (k + 2.0 * lambda)).sqrt();
    while nchi2_cdf(hi, k, lambda).expect("valid args") < u {
        hi *= 2.0;
    }
    let mut x = k + lambda;
    for _ in 0..120 {
        let f = nchi2_cdf(x, k, lambda).expect("valid args") - u;
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = nchi2_pdf(x, k, lambda).expect("valid args");
        let mut next = if d > 0.0 { x - f / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-12 * x.abs().max(1e-300) {
            return next;
        }
        x = next;
    }
    x
}

/// Real-world Monte Carlo price of a terminal-GOP payoff by exact
/// one-step sampling to the expiry: `S_0 E[payoff(S_T)/S_T]`.
///
/// With the antithetic flag set, draws come in anticomonotone pairs
/// through the inverse CDF of the terminal law (`u` and `1 - u`), which
/// cannot increase the variance of monotone payoffs. Plain sampling uses
/// the Poisson-mixture transition draw.
pub fn mc_benchmarked(
    p: &TcevParams,
    r: f64,
    expiry: f64,
    payoff: impl Fn(f64) -> f64 + Sync,
    cfg: &McConfig,
) -> Result<McEstimate> {
    let q = p.besq_exponent();
    let dphi = p.phi(expiry) - p.phi(0.0);
    if !(dphi > 0.0) {
        return Err(Error::domain("mc_european", "expiry must be positive"));
    }
    let lambda = p.x0.powf(q) / dphi;
    let beta_t = SavingsAccount::new(r).beta(expiry);
    let dim = p.dimension();

    let est = if cfg.antithetic {
        let pairs = (cfg.paths / 2).max(1);
        batched_mean(pairs, cfg.seed, |rng| {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            for uu in [u, 1.0 - u] {
                let quad = nchi2_quantile(uu, dim, lambda);
                let gop = beta_t * (dphi * quad).powf(1.0 / q);
                acc += payoff(gop) / gop;
            }
            acc / 2.0
        })
    } else {
        batched_mean(cfg.paths, cfg.seed, |rng| {
            let xb = p
                .exact_sample(p.x0, 0.0, expiry, rng)
                .expect("valid horizon");
            let gop = beta_t * xb;
            payoff(gop) / gop
        })
    };
    Ok(est.scaled(p.x0))
}

/// Monte Carlo European option price (exact transition, one long step).
pub fn mc_european(
    p: &TcevParams,
    r: f64,
    spec: &EuropeanSpec,
    cfg: &McConfig,
) -> Result<McEstimate> {
    let (kind, strike) = (spec.kind, spec.strike);
    mc_benchmarked(
        p,
        r,
        spec.expiry,
        move |s| match kind {
            OptionKind::Put => (strike - s).max(0.0),
            OptionKind::Call => (s - strike).max(0.0),
        },
        cfg,
    )
}

/// Least-squares Monte Carlo for Bermudan options on the GOP: exact
/// long-step transitions between exercise dates, polynomial regression of
/// benchmarked continuation values on in-the-money paths, realized
/// cashflows carried along paths.
pub fn mc_bermudan_lsmc(
    p: &TcevParams,
    r: f64,
    spec: &BermudanSpec,
    cfg: &McConfig,
    basis_degree: usize,
) -> Result<McEstimate> {
    let states = lsmc_path_panel(p, &spec.exercise_times, cfg);
    lsmc_backward(p, r, spec, cfg, basis_degree, &states)
}

/// [`mc_bermudan_lsmc`] across a strike grid on one shared path panel.
pub fn mc_bermudan_lsmc_strip(
    p: &TcevParams,
    r: f64,
    exercise_times: &[f64],
    strikes: &[f64],
    kind: OptionKind,
    cfg: &McConfig,
    basis_degree: usize,
) -> Result<Vec<McEstimate>> {
    let states = lsmc_path_panel(p, exercise_times, cfg);
    strikes
        .iter()
        .map(|&k| {
            let spec = BermudanSpec::new(exercise_times.to_vec(), k, kind)?;
            lsmc_backward(p, r, &spec, cfg, basis_degree, &states)
        })
        .collect()
}

/// Forward pass: exact transitions date to date, paths in batches;
/// row-major `n_paths x n_dates`.
fn lsmc_path_panel(p: &TcevParams, dates: &[f64], cfg: &McConfig) -> Vec<f64> {
    let n_dates = dates.len();
    let mut states = vec![0.0_f64; cfg.paths * n_dates];
    states
        .par_chunks_mut(BATCH * n_dates)
        .enumerate()
        .for_each(|(b, chunk)| {
            let mut rng = ChaCha12Rng::seed_from_u64(batch_seed(cfg.seed, b as u64));
            for path in chunk.chunks_mut(n_dates) {
                let mut x = p.x0;
                let mut t = 0.0;
                for (k, &te) in dates.iter().enumerate() {
                    x = p.exact_sample(x, t, te, &mut rng).expect("grid times");
                    t = te;
                    path[k] = x;
                }
            }
        });
    states
}

fn lsmc_backward(
    p: &TcevParams,
    r: f64,
    spec: &BermudanSpec,
    cfg: &McConfig,
    basis_degree: usize,
    states: &[f64],
) -> Result<McEstimate> {
    if basis_degree > 7 {
        return Err(Error::domain(
            "mc_bermudan_lsmc",
            "basis degree above 7 is not supported",
        ));
    }
    let dates = &spec.exercise_times;
    let n_dates = dates.len();
    let n_paths = cfg.paths;
    let beta = SavingsAccount::new(r);

    let state = |i: usize, k: usize| states[i * n_dates + k];
    let intrinsic = |x: f64, t: f64| {
        let gop = beta.beta(t) * x;
        let h = match spec.kind {
            OptionKind::Put => (spec.strike - gop).max(0.0),
            OptionKind::Call => (gop - spec.strike).max(0.0),
        };
        (h / gop, h > 0.0)
    };

    // benchmarked cashflows at the final exercise date
    let t_last = dates[n_dates - 1];
    let mut cashflow: Vec<f64> = (0..n_paths)
        .map(|i| intrinsic(state(i, n_dates - 1), t_last).0)
        .collect();

    for k in (0..n_dates - 1).rev() {
        let t = dates[k];
        let itm: Vec<usize> = (0..n_paths)
            .filter(|&i| intrinsic(state(i, k), t).1)
            .collect();
        if itm.len() < basis_degree + 2 {
            continue;
        }
        // center and scale the regressor for conditioning
        let mean: f64 = itm.iter().map(|&i| state(i, k)).sum::<f64>() / itm.len() as f64;
        let sd = (itm
            .iter()
            .map(|&i| (state(i, k) - mean).powi(2))
            .sum::<f64>()
            / itm.len() as f64)
            .sqrt()
            .max(1e-12);

        let mut degree = basis_degree;
        let coeffs = loop {
            match fit_polynomial(
                itm.iter()
                    .map(|&i| ((state(i, k) - mean) / sd, cashflow[i])),
                degree,
            ) {
                Some(c) => break c,
                None if degree > 0 => {
                    eprintln!(
                        "lsmc: rank-deficient regression at t = {t}, reducing degree to {}",
                        degree - 1
                    );
                    degree -= 1;
                }
                None => break vec![0.0],
            }
        };

        for &i in &itm {
            let u = (state(i, k) - mean) / sd;
            let continuation = polyval(&coeffs, u);
            let (exercise, _) = intrinsic(state(i, k), t);
            if exercise > continuation {
                cashflow[i] = exercise;
            }
        }
    }

    let stats = cashflow.iter().fold(BatchStats::default(), |mut s, &v| {
        s.push(v);
        s
    });
    Ok(stats.estimate().scaled(p.x0))
}

/// Least-squares polynomial fit by normal equations with partial-pivot
/// elimination; `None` when the system is numerically singular.
fn fit_polynomial(
    points: impl Iterator<Item = (f64, f64)> + Clone,
    degree: usize,
) -> Option<Vec<f64>> {
    let d = degree + 1;
    let mut xtx = vec![0.0_f64; d * d];
    let mut xty = vec![0.0_f64; d];
    for (u, y) in points {
        let mut pow = [0.0; 8];
        let mut v = 1.0;
        for pw in pow.iter_mut().take(d) {
            *pw = v;
            v *= u;
        }
        for a in 0..d {
            for b in 0..d {
                xtx[a * d + b] += pow[a] * pow[b];
            }
            xty[a] += pow[a] * y;
        }
    }
    solve_dense(&mut xtx, &mut xty, d)
}

fn solve_dense(a: &mut [f64], b: &mut [f64], d: usize) -> Option<Vec<f64>> {
    for col in 0..d {
        let (piv, max) = (col..d)
            .map(|r| (r, a[r * d + col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if max < 1e-10 * (d as f64) {
            return None;
        }
        if piv != col {
            for c in 0..d {
                a.swap(col * d + c, piv * d + c);
            }
            b.swap(col, piv);
        }
        for r in col + 1..d {
            let f = a[r * d + col] / a[col * d + col];
            for c in col..d {
                a[r * d + c] -= f * a[col * d + c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; d];
    for r in (0..d).rev() {
        let mut s = b[r];
        for c in r + 1..d {
            s -= a[r * d + c] * x[c];
        }
        x[r] = s / a[r * d + r];
    }
    Some(x)
}

fn polyval(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * u + ci)
}

/// Terminal state and trapezoidal accrual of one Euler path of the 3/2
/// short rate.
#[derive(Debug, Clone, Copy)]
pub struct RatePathSummary {
    pub r_end: f64,
    /// `int_0^T r dt` by the trapezoid rule on the Euler skeleton.
    pub accrual: f64,
}

fn euler_rate_path<R: Rng + ?Sized>(
    p: &Rate32Params,
    n_steps: usize,
    dt: f64,
    rng: &mut R,
) -> RatePathSummary {
    let mut r = p.r0;
    let mut accrual = 0.0;
    for _ in 0..n_steps {
        let z: f64 = StandardNormal.sample(rng);
        let next = (r + p.drift_unchecked(r) * dt + p.diffusion_unchecked(r) * dt.sqrt() * z)
            .max(EULER_FLOOR);
        accrual += 0.5 * (r + next) * dt;
        r = next;
    }
    RatePathSummary { r_end: r, accrual }
}

/// Simulates `cfg.paths` Euler paths of the 3/2 rate out to `horizon`,
/// returning terminal rate and accrued integral per path. Deterministic
/// in `cfg.seed`; the antithetic flag does not apply here.
pub fn mc_rate32_euler_paths(
    p: &Rate32Params,
    horizon: f64,
    cfg: &McConfig,
) -> Vec<RatePathSummary> {
    let n_steps = (horizon * cfg.steps_per_year as f64).ceil() as usize;
    let dt = horizon / n_steps as f64;
    let n_batches = cfg.paths.div_ceil(BATCH);
    (0..n_batches)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = ChaCha12Rng::seed_from_u64(batch_seed(cfg.seed, b as u64));
            let count = BATCH.min(cfg.paths - b * BATCH);
            (0..count)
                .map(|_| euler_rate_path(p, n_steps, dt, &mut rng))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Monte Carlo fair zero-coupon bond under the hybrid model,
/// `E[(xbar_0/xbar_T) e^{-int r}]`. At `rho = 0` the GOP leg is
/// long-stepped with the exact transition; otherwise both coordinates
/// run on a correlated Euler scheme driven by Cholesky-coupled normals.
pub fn mc_hybrid_zcb(
    p_rate: &Rate32Params,
    p_tcev: &TcevParams,
    rho: f64,
    expiry: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if !(rho.abs() < 1.0) {
        return Err(Error::domain("mc_hybrid_zcb", "|rho| must be < 1"));
    }
    if rho == 0.0 {
        let n_steps = (expiry * cfg.steps_per_year as f64).ceil() as usize;
        let dt = expiry / n_steps as f64;
        let est = batched_mean(cfg.paths, cfg.seed, |rng| {
            let rp = euler_rate_path(p_rate, n_steps, dt, rng);
            let xb = p_tcev
                .exact_sample(p_tcev.x0, 0.0, expiry, rng)
                .expect("positive horizon");
            (-rp.accrual).exp() * p_tcev.x0 / xb
        });
        return Ok(est);
    }
    mc_hybrid_zcb_euler(p_rate, p_tcev, rho, expiry, cfg)
}

/// Fully Euler variant of [`mc_hybrid_zcb`], valid for any `|rho| < 1`
/// including zero. Correlation sweeps compare prices across `rho` with
/// this variant so that the discretization of the GOP leg is identical at
/// every correlation and cancels from the deviations.
///
/// The GOP leg steps the exact log dynamics
/// `d ln xbar = theta_t^2/2 dt + theta_t dW`: a plain Euler step in the
/// level coordinate is explosive, because paths pushed onto the
/// positivity floor re-enter through the `x^{2a-1}` drift singularity and
/// dominate the benchmarked ratio.
pub fn mc_hybrid_zcb_euler(
    p_rate: &Rate32Params,
    p_tcev: &TcevParams,
    rho: f64,
    expiry: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if !(rho.abs() < 1.0) {
        return Err(Error::domain("mc_hybrid_zcb", "|rho| must be < 1"));
    }
    let n_steps = (expiry * cfg.steps_per_year as f64).ceil() as usize;
    let dt = expiry / n_steps as f64;
    let cross = (1.0 - rho * rho).sqrt();
    let est = batched_mean(cfg.paths, cfg.seed, |rng| {
        let mut r = p_rate.r0;
        let mut lx = p_tcev.x0.ln();
        let mut accrual = 0.0;
        let mut t = 0.0;
        for _ in 0..n_steps {
            let zr: f64 = StandardNormal.sample(rng);
            let zp: f64 = StandardNormal.sample(rng);
            let zx = rho * zr + cross * zp;
            let rn = (r
                + p_rate.drift_unchecked(r) * dt
                + p_rate.diffusion_unchecked(r) * dt.sqrt() * zr)
                .max(EULER_FLOOR);
            let th = p_tcev.mpor(lx.exp(), t);
            lx += 0.5 * th * th * dt + th * dt.sqrt() * zx;
            accrual += 0.5 * (r + rn) * dt;
            r = rn;
            t += dt;
        }
        (-accrual).exp() * p_tcev.x0 / lx.exp()
    });
    Ok(est)
}

/// Monte Carlo price of a European put on a fair zero-coupon bond
/// (independent short rate): Euler rate path to the option expiry, exact
/// GOP long step, inner bond at the node by the analytic product form.
pub fn mc_zcb_option(
    p_rate: &Rate32Params,
    p_tcev: &TcevParams,
    spec: &BondOptionSpec,
    cfg: &McConfig,
) -> Result<McEstimate> {
    let strikes = [spec.strike];
    Ok(mc_zcb_option_strip(
        p_rate,
        p_tcev,
        spec.expiry,
        spec.bond_maturity,
        &strikes,
        cfg,
    )?[0])
}

/// [`mc_zcb_option`] across a strike grid on one common set of paths:
/// the per-path benchmarked discount and inner bond price are drawn once
/// and reused by every strike.
pub fn mc_zcb_option_strip(
    p_rate: &Rate32Params,
    p_tcev: &TcevParams,
    expiry: f64,
    bond_maturity: f64,
    strikes: &[f64],
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    if !(bond_maturity > expiry && expiry > 0.0) {
        return Err(Error::domain(
            "mc_zcb_option",
            "need bond maturity > option expiry > 0",
        ));
    }
    let n_steps = (expiry * cfg.steps_per_year as f64).ceil() as usize;
    let dt = expiry / n_steps as f64;
    let kummer = KummerBondParams::new(p_rate)?;

    // per path: (benchmarked stochastic discount, inner bond at expiry)
    let n_batches = cfg.paths.div_ceil(BATCH);
    let legs: Vec<(f64, f64)> = (0..n_batches)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = ChaCha12Rng::seed_from_u64(batch_seed(cfg.seed, b as u64));
            let count = BATCH.min(cfg.paths - b * BATCH);
            (0..count)
                .map(|_| {
                    let rp = euler_rate_path(p_rate, n_steps, dt, &mut rng);
                    let xb = p_tcev
                        .exact_sample(p_tcev.x0, 0.0, expiry, &mut rng)
                        .expect("positive horizon");
                    let bond = mpor_component_state(p_tcev, xb, expiry, bond_maturity)
                        .expect("valid state")
                        * kummer
                            .g(rp.r_end, expiry, bond_maturity)
                            .expect("valid state");
                    ((-rp.accrual).exp() * p_tcev.x0 / xb, bond)
                })
                .collect::<Vec<_>>()
        })
        .collect();

    Ok(strikes
        .iter()
        .map(|&k| {
            let mut stats = BatchStats::default();
            for &(w, bond) in &legs {
                stats.push(w * (k - bond).max(0.0));
            }
            stats.estimate()
        })
        .collect())
}

/// Fair-bond Monte Carlo curve at every monthly maturity up to `horizon`
/// (zero correlation): one set of paths carries the Euler rate accrual
/// and a monthly exact-transition GOP chain past every mark.
pub fn mc_hybrid_zcb_curve(
    p_rate: &Rate32Params,
    p_tcev: &TcevParams,
    horizon: f64,
    cfg: &McConfig,
) -> Result<Vec<(f64, McEstimate)>> {
    let months = (horizon * 12.0).round() as usize;
    if months == 0 || (horizon * 12.0 - months as f64).abs() > 1e-9 {
        return Err(Error::domain(
            "mc_hybrid_zcb_curve",
            "horizon must be a whole number of months",
        ));
    }
    let sub = (cfg.steps_per_year as f64 / 12.0).ceil().max(1.0) as usize;
    let dt = 1.0 / 12.0 / sub as f64;

    let n_batches = cfg.paths.div_ceil(BATCH);
    let batches: Vec<Vec<BatchStats>> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha12Rng::seed_from_u64(batch_seed(cfg.seed, b as u64));
            let count = BATCH.min(cfg.paths - b * BATCH);
            let mut stats = vec![BatchStats::default(); months];
            for _ in 0..count {
                let mut r = p_rate.r0;
                let mut xb = p_tcev.x0;
                let mut accrual = 0.0;
                for (month, slot) in stats.iter_mut().enumerate() {
                    for _ in 0..sub {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        let next = (r
                            + p_rate.drift_unchecked(r) * dt
                            + p_rate.diffusion_unchecked(r) * dt.sqrt() * z)
                            .max(EULER_FLOOR);
                        accrual += 0.5 * (r + next) * dt;
                        r = next;
                    }
                    let t0 = month as f64 / 12.0;
                    xb = p_tcev
                        .exact_sample(xb, t0, t0 + 1.0 / 12.0, &mut rng)
                        .expect("grid times");
                    slot.push((-accrual).exp() * p_tcev.x0 / xb);
                }
            }
            stats
        })
        .collect();

    let merged = (0..months).map(|m| {
        batches
            .iter()
            .map(|b| b[m])
            .fold(BatchStats::default(), BatchStats::merge)
    });
    Ok(merged
        .enumerate()
        .map(|(m, s)| ((m + 1) as f64 / 12.0, s.estimate()))
        .collect())
}
