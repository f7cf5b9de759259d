//! Recursive marginal quantization: per-step codeword grids, companion
//! probabilities and one-step transition matrices.

use super::optimize::{companion_probs, optimize_codewords};
use super::surrogate::{mixture_mean_sd, mixture_moments, GaussianSurrogate};
use crate::error::{Error, Result};
use crate::specfun::normal_cdf;
use std::io::Write;
use std::path::Path;

/// Codewords and companion probabilities of one time step.
#[derive(Debug, Clone)]
pub struct QuantStep {
    pub codewords: Vec<f64>,
    pub probs: Vec<f64>,
}

/// Dense row-stochastic matrix from one step's codewords to the next's.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    pub n_from: usize,
    pub n_to: usize,
    data: Vec<f64>,
}

impl TransitionMatrix {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_to..(i + 1) * self.n_to]
    }

    /// `v^T T` for a distribution vector `v` over the source codewords.
    pub fn push_forward(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_to];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(self.row(i)) {
                *o += vi * t;
            }
        }
        out
    }

    /// `T v` for a value vector `v` over the target codewords
    /// (one backward-induction sweep).
    pub fn pull_back(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n_from)
            .map(|i| self.row(i).iter().zip(v).map(|(&t, &x)| t * x).sum())
            .collect()
    }
}

/// The product of a recursive marginal quantization run: per-step
/// codewords, companion probabilities and one-step transitions.
#[derive(Debug, Clone)]
pub struct QuantGrid {
    /// Grid times, starting at zero.
    pub times: Vec<f64>,
    /// Marginal quantizers; `steps[0]` is the one-point start grid.
    pub steps: Vec<QuantStep>,
    /// `trans[k]` maps step `k` to step `k + 1`.
    pub trans: Vec<TransitionMatrix>,
}

impl QuantGrid {
    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("nonempty grid")
    }

    /// Index of the grid time matching `t`, within 1e-9 years.
    pub fn step_index(&self, t: f64) -> Result<usize> {
        self.times
            .iter()
            .position(|&tk| (tk - t).abs() < 1e-9)
            .ok_or_else(|| {
                Error::GridMismatch(format!(
                    "time {t} is not a grid time (horizon {})",
                    self.horizon()
                ))
            })
    }

    pub fn terminal(&self) -> &QuantStep {
        self.steps.last().expect("nonempty grid")
    }

    /// Writes the grid as one CSV per step into `dir`:
    /// `step_0000.csv`, ... with columns `codeword, probability,
    /// trans_0, ..., trans_{M-1}` (transition row toward the next step;
    /// omitted on the terminal step).
    pub fn write_csv(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (k, step) in self.steps.iter().enumerate() {
            let mut f = std::fs::File::create(dir.join(format!("step_{k:04}.csv")))?;
            let n_to = if k < self.trans.len() {
                self.trans[k].n_to
            } else {
                0
            };
            write!(f, "codeword,probability")?;
            for j in 0..n_to {
                write!(f, ",trans_{j}")?;
            }
            writeln!(f)?;
            for i in 0..step.codewords.len() {
                write!(f, "{:.12e},{:.12e}", step.codewords[i], step.probs[i])?;
                if n_to > 0 {
                    for &t in self.trans[k].row(i) {
                        write!(f, ",{t:.12e}")?;
                    }
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// One-step transition matrix: `T_ij` is the surrogate Gaussian mass,
/// started from source codeword `i`, of the Voronoi cell of target
/// codeword `j`. Rows telescope to one.
pub fn transition_matrix(
    prev: &QuantStep,
    surrogate: &GaussianSurrogate,
    next_codewords: &[f64],
    t: f64,
    dt: f64,
) -> Result<TransitionMatrix> {
    if !next_codewords.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::domain(
            "transition_matrix",
            "target codewords must be strictly increasing",
        ));
    }
    let n_from = prev.codewords.len();
    let n_to = next_codewords.len();
    let mids: Vec<f64> = next_codewords
        .windows(2)
        .map(|w| 0.5 * (w[0] + w[1]))
        .collect();
    let mut data = vec![0.0; n_from * n_to];
    for (i, &x) in prev.codewords.iter().enumerate() {
        let mean = surrogate.mean(x, t, dt);
        let var = surrogate.var(x, t, dt);
        if !(var > 0.0) {
            return Err(Error::domain(
                "transition_matrix",
                format!("nonpositive variance {var} at codeword {x}"),
            ));
        }
        let sd = var.sqrt();
        let row = &mut data[i * n_to..(i + 1) * n_to];
        let mut f_lo = 0.0;
        for j in 0..n_to {
            let f_hi = if j + 1 < n_to {
                normal_cdf((mids[j] - mean) / sd)
            } else {
                1.0
            };
            row[j] = f_hi - f_lo;
            f_lo = f_hi;
        }
    }
    Ok(TransitionMatrix { n_from, n_to, data })
}

/// Builds the RMQ grid of a scalar SDE over `[0, horizon]` with
/// `steps_per_year` uniform steps and `n` codewords at every step after
/// the one-point start.
pub fn rmq_build(
    surrogate: &GaussianSurrogate,
    x0: f64,
    horizon: f64,
    steps_per_year: usize,
    n: usize,
) -> Result<QuantGrid> {
    let steps = (horizon * steps_per_year as f64).round() as usize;
    rmq_build_sized(surrogate, x0, horizon, steps_per_year, &vec![n; steps])
}

/// As [`rmq_build`] with an explicit codeword count per step.
pub fn rmq_build_sized(
    surrogate: &GaussianSurrogate,
    x0: f64,
    horizon: f64,
    steps_per_year: usize,
    sizes: &[usize],
) -> Result<QuantGrid> {
    if steps_per_year == 0 {
        return Err(Error::domain("rmq_build", "steps_per_year must be >= 1"));
    }
    let n_steps_f = horizon * steps_per_year as f64;
    let n_steps = n_steps_f.round() as usize;
    if n_steps == 0 || (n_steps_f - n_steps as f64).abs() > 1e-9 {
        return Err(Error::GridMismatch(format!(
            "horizon {horizon} is not a whole number of steps at {steps_per_year}/year"
        )));
    }
    if sizes.len() != n_steps {
        return Err(Error::GridMismatch(format!(
            "{} step sizes for {n_steps} steps",
            sizes.len()
        )));
    }
    let dt = 1.0 / steps_per_year as f64;

    let mut grid = QuantGrid {
        times: vec![0.0],
        steps: vec![QuantStep {
            codewords: vec![x0],
            probs: vec![1.0],
        }],
        trans: Vec::with_capacity(n_steps),
    };

    for (k, &n) in sizes.iter().enumerate() {
        let t = k as f64 * dt;
        let prev = &grid.steps[k];
        let mix = mixture_moments(&prev.codewords, &prev.probs, surrogate, t, dt)?;
        let (mmean, msd) = mixture_mean_sd(&mix);

        let init: Vec<f64> = if prev.codewords.len() == 1 {
            // spread the first proper grid over +/- 3 standard deviations
            (0..n)
                .map(|j| {
                    if n == 1 {
                        mmean
                    } else {
                        mmean + msd * (6.0 * j as f64 / (n - 1) as f64 - 3.0)
                    }
                })
                .collect()
        } else {
            // transport the previous grid to the new mean and scale
            let (pmean, psd) = step_mean_sd(prev);
            let ratio = if psd > 0.0 { msd / psd } else { 1.0 };
            let mut v: Vec<f64> = prev
                .codewords
                .iter()
                .map(|&g| mmean + (g - pmean) * ratio)
                .collect();
            resize_grid(&mut v, n);
            v
        };

        let mut codewords =
            optimize_codewords(&mix, n, &init).map_err(|e| Error::QuantizerStep {
                step: k + 1,
                source: Box::new(e),
            })?;
        if let Some(floor) = surrogate.state_floor {
            enforce_floor_increasing(&mut codewords, floor);
        }

        let probs = companion_probs(&mix, &codewords);
        let tr = transition_matrix(prev, surrogate, &codewords, t, dt)?;
        grid.trans.push(tr);
        grid.steps.push(QuantStep { codewords, probs });
        grid.times.push((k + 1) as f64 * dt);
    }
    Ok(grid)
}

fn step_mean_sd(step: &QuantStep) -> (f64, f64) {
    let mean: f64 = step
        .codewords
        .iter()
        .zip(&step.probs)
        .map(|(&g, &p)| p * g)
        .sum();
    let var: f64 = step
        .codewords
        .iter()
        .zip(&step.probs)
        .map(|(&g, &p)| p * (g - mean) * (g - mean))
        .sum();
    (mean, var.sqrt())
}

/// Grows or shrinks a warm-start grid to `n` points by linear
/// interpolation in rank space.
fn resize_grid(v: &mut Vec<f64>, n: usize) {
    if v.len() == n {
        return;
    }
    let old = v.clone();
    let m = old.len();
    *v = (0..n)
        .map(|j| {
            let pos = j as f64 * (m - 1) as f64 / (n.max(2) - 1) as f64;
            let lo = pos.floor() as usize;
            let frac = pos - lo as f64;
            if lo + 1 < m {
                old[lo] * (1.0 - frac) + old[lo + 1] * frac
            } else {
                old[m - 1]
            }
        })
        .collect();
}

/// Clamps to the state floor and repairs any ties the clamp created.
fn enforce_floor_increasing(grid: &mut [f64], floor: f64) {
    for g in grid.iter_mut() {
        if *g < floor {
            *g = floor;
        }
    }
    for j in 1..grid.len() {
        if grid[j] <= grid[j - 1] {
            grid[j] = grid[j - 1] * (1.0 + 1e-12) + 1e-300;
        }
    }
}
