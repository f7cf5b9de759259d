//! Joint recursive marginal quantization of the (short rate, discounted
//! GOP) pair. Each marginal is quantized independently; the correlation
//! enters only through the one-step transition weights, which are
//! bivariate Gaussian rectangle probabilities over the product Voronoi
//! cells. At zero correlation the weights factorize into the product of
//! the marginal transition matrices exactly.

use super::bvn::bvn_cdf;
use super::grid::{rmq_build, QuantGrid};
use super::surrogate::GaussianSurrogate;
use crate::error::{Error, Result};
use rayon::prelude::*;

/// One-step conditional moments at every marginal codeword of a step.
#[derive(Debug, Clone)]
struct StepMoments {
    r_mean: Vec<f64>,
    r_sd: Vec<f64>,
    x_mean: Vec<f64>,
    x_sd: Vec<f64>,
}

/// Joint quantization grid over the product state space.
///
/// Joint transition tensors are streamed on demand from the stored
/// marginal moments instead of being materialized: a full tensor has
/// `(N_r N_x)^2` entries per step, which is far beyond memory at the
/// grid sizes used for bond experiments.
pub struct JointQuantGrid {
    pub times: Vec<f64>,
    pub rate: QuantGrid,
    pub gop: QuantGrid,
    pub rho: f64,
    /// Joint probabilities per step, row-major `(rate index) * n_gop + (gop index)`.
    pub joint_probs: Vec<Vec<f64>>,
    moments: Vec<StepMoments>,
}

impl JointQuantGrid {
    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("nonempty grid")
    }

    pub fn step_index(&self, t: f64) -> Result<usize> {
        self.rate.step_index(t)
    }

    /// `(rate codewords, gop codewords)` at step `k`.
    pub fn nodes(&self, k: usize) -> (&[f64], &[f64]) {
        (&self.rate.steps[k].codewords, &self.gop.steps[k].codewords)
    }

    /// Streams the nonzero transition weights from node `(i, m)` of step
    /// `k` to the nodes of step `k + 1` as `(j, n, weight)`. Weights sum
    /// to one: the sparse window is closed by pushing its outer edges to
    /// infinity.
    pub fn for_each_transition<F: FnMut(usize, usize, f64)>(
        &self,
        k: usize,
        i: usize,
        m: usize,
        mut f: F,
    ) {
        if self.rho == 0.0 {
            let r_row = self.rate.trans[k].row(i);
            let x_row = self.gop.trans[k].row(m);
            for (j, &pr) in r_row.iter().enumerate() {
                if pr == 0.0 {
                    continue;
                }
                for (n, &px) in x_row.iter().enumerate() {
                    let p = pr * px;
                    if p > 0.0 {
                        f(j, n, p);
                    }
                }
            }
            return;
        }

        let mom = &self.moments[k];
        let (mr, sr) = (mom.r_mean[i], mom.r_sd[i]);
        let (mx, sx) = (mom.x_mean[m], mom.x_sd[m]);
        let r_next = &self.rate.steps[k + 1].codewords;
        let x_next = &self.gop.steps[k + 1].codewords;

        let (j_lo, j_hi, r_edges) = window_edges(r_next, mr, sr);
        let (n_lo, n_hi, x_edges) = window_edges(x_next, mx, sx);

        // corner CDF table over the window boundary grid
        let wr = r_edges.len();
        let wx = x_edges.len();
        let mut corners = vec![0.0; wr * wx];
        for (a, &he) in r_edges.iter().enumerate() {
            for (b, &ke) in x_edges.iter().enumerate() {
                corners[a * wx + b] = bvn_cdf(he, ke, self.rho);
            }
        }
        for a in 0..wr - 1 {
            for b in 0..wx - 1 {
                let p = corners[(a + 1) * wx + b + 1]
                    - corners[a * wx + b + 1]
                    - corners[(a + 1) * wx + b]
                    + corners[a * wx + b];
                if p > 0.0 {
                    f(j_lo + a, n_lo + b, p);
                }
                let _ = n_hi;
                let _ = j_hi;
            }
        }
    }

    /// Dense transition row from node `(i, m)`; diagnostic/test helper.
    pub fn transition_row(&self, k: usize, i: usize, m: usize) -> Vec<f64> {
        let n_x = self.gop.steps[k + 1].codewords.len();
        let n_r = self.rate.steps[k + 1].codewords.len();
        let mut row = vec![0.0; n_r * n_x];
        self.for_each_transition(k, i, m, |j, n, p| row[j * n_x + n] += p);
        row
    }
}

/// Standardized Voronoi edges of the cells within `+/- 8` conditional
/// standard deviations, outer edges clamped to infinity so that the
/// windowed rectangle probabilities conserve mass exactly.
fn window_edges(codewords: &[f64], mean: f64, sd: f64) -> (usize, usize, Vec<f64>) {
    let n = codewords.len();
    let mids: Vec<f64> = codewords.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let lo_bound = mean - 8.0 * sd;
    let hi_bound = mean + 8.0 * sd;
    let j_lo = mids.partition_point(|&v| v <= lo_bound);
    let j_hi = mids.partition_point(|&v| v < hi_bound); // inclusive cell index
    let mut edges = Vec::with_capacity(j_hi - j_lo + 2);
    edges.push(f64::NEG_INFINITY);
    for &mid in &mids[j_lo..j_hi] {
        edges.push((mid - mean) / sd);
    }
    edges.push(f64::INFINITY);
    (j_lo, j_hi.min(n - 1), edges)
}

/// Builds the joint grid: independent marginal RMQ runs, per-step
/// conditional moments, and forward-propagated joint probabilities.
#[allow(clippy::too_many_arguments)]
pub fn joint_rmq_build(
    rate_surrogate: &GaussianSurrogate,
    gop_surrogate: &GaussianSurrogate,
    rho: f64,
    r0: f64,
    x0: f64,
    horizon: f64,
    steps_per_year: usize,
    n_rate: usize,
    n_gop: usize,
) -> Result<JointQuantGrid> {
    if !(rho.abs() < 1.0) {
        return Err(Error::domain(
            "joint_rmq_build",
            format!("|rho| = {} must be < 1", rho.abs()),
        ));
    }
    let rate = rmq_build(rate_surrogate, r0, horizon, steps_per_year, n_rate)?;
    let gop = rmq_build(gop_surrogate, x0, horizon, steps_per_year, n_gop)?;
    let dt = 1.0 / steps_per_year as f64;
    let n_steps = rate.trans.len();

    let mut moments = Vec::with_capacity(n_steps);
    for k in 0..n_steps {
        let t = rate.times[k];
        let stats = |codewords: &[f64], s: &GaussianSurrogate| {
            let mean: Vec<f64> = codewords.iter().map(|&c| s.mean(c, t, dt)).collect();
            let sd: Vec<f64> = codewords.iter().map(|&c| s.var(c, t, dt).sqrt()).collect();
            (mean, sd)
        };
        let (r_mean, r_sd) = stats(&rate.steps[k].codewords, rate_surrogate);
        let (x_mean, x_sd) = stats(&gop.steps[k].codewords, gop_surrogate);
        moments.push(StepMoments {
            r_mean,
            r_sd,
            x_mean,
            x_sd,
        });
    }

    let mut grid = JointQuantGrid {
        times: rate.times.clone(),
        rate,
        gop,
        rho,
        joint_probs: vec![vec![1.0]],
        moments,
    };

    for k in 0..n_steps {
        let n_r_next = grid.rate.steps[k + 1].codewords.len();
        let n_x_next = grid.gop.steps[k + 1].codewords.len();
        let n_x_cur = grid.gop.steps[k].codewords.len();
        let cur = &grid.joint_probs[k];

        let next = if grid.rho == 0.0 {
            // product evolution of the marginals
            let pr = grid.rate.trans[k].push_forward(&grid.rate.steps[k].probs);
            let px = grid.gop.trans[k].push_forward(&grid.gop.steps[k].probs);
            let mut out = vec![0.0; n_r_next * n_x_next];
            for (j, &a) in pr.iter().enumerate() {
                for (n, &b) in px.iter().enumerate() {
                    out[j * n_x_next + n] = a * b;
                }
            }
            out
        } else {
            cur.par_iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .fold(
                    || vec![0.0; n_r_next * n_x_next],
                    |mut acc, (node, &p)| {
                        let (i, m) = (node / n_x_cur, node % n_x_cur);
                        grid.for_each_transition(k, i, m, |j, n, w| {
                            acc[j * n_x_next + n] += p * w;
                        });
                        acc
                    },
                )
                .reduce(
                    || vec![0.0; n_r_next * n_x_next],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x += y;
                        }
                        a
                    },
                )
        };
        grid.joint_probs.push(next);
    }
    Ok(grid)
}
