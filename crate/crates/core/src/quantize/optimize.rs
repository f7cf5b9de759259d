//! Stationary-grid optimization of the quadratic distortion against a
//! Gaussian mixture: damped Newton on the distortion gradient with the
//! exact (tridiagonal) Hessian, falling back to a Lloyd fixed-point sweep
//! whenever a Newton candidate would break grid monotonicity or raise the
//! distortion. The diagonal-only Hessian contracts too slowly to reach the
//! gradient tolerance within the iteration budget, so the off-diagonal
//! midpoint terms are kept and the step solved by the Thomas algorithm.

use super::surrogate::{mixture_mean_sd, MixtureComponent};
use crate::error::{Error, Result};
use crate::specfun::{normal_cdf, normal_pdf};

const MAX_ITER: usize = 200;
const GRAD_TOL: f64 = 1e-9;

/// Per-cell statistics of the mixture over the Voronoi partition of `grid`.
struct CellStats {
    /// mass per cell
    d_f: Vec<f64>,
    /// first partial moment per cell
    d_m1: Vec<f64>,
    /// mixture density at the interior midpoints (n-1 values)
    pdf_mid: Vec<f64>,
}

fn midpoints(grid: &[f64]) -> Vec<f64> {
    grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

fn cell_stats(mix: &[MixtureComponent], grid: &[f64]) -> CellStats {
    let n = grid.len();
    let mids = midpoints(grid);
    let mut d_f = vec![0.0; n];
    let mut d_m1 = vec![0.0; n];
    let mut pdf_mid = vec![0.0; n.saturating_sub(1)];
    for comp in mix {
        let sd = comp.var.sqrt();
        // running F and M1 at the lower cell edge, starting at -inf
        let mut f_lo = 0.0;
        let mut m1_lo = 0.0;
        for j in 0..n {
            let (f_hi, m1_hi) = if j + 1 < n {
                let u = (mids[j] - comp.mean) / sd;
                let (cd, pd) = (normal_cdf(u), normal_pdf(u));
                pdf_mid[j] += comp.weight * pd / sd;
                (cd, comp.mean * cd - sd * pd)
            } else {
                (1.0, comp.mean)
            };
            d_f[j] += comp.weight * (f_hi - f_lo);
            d_m1[j] += comp.weight * (m1_hi - m1_lo);
            f_lo = f_hi;
            m1_lo = m1_hi;
        }
    }
    CellStats { d_f, d_m1, pdf_mid }
}

/// Quadratic distortion of `grid` against the mixture.
pub fn distortion(mix: &[MixtureComponent], grid: &[f64]) -> f64 {
    let n = grid.len();
    let mids = midpoints(grid);
    let mut total = 0.0;
    for comp in mix {
        let sd = comp.var.sqrt();
        let m2_full = comp.mean * comp.mean + comp.var;
        let (mut f_lo, mut m1_lo, mut m2_lo) = (0.0, 0.0, 0.0);
        for j in 0..n {
            let (f_hi, m1_hi, m2_hi) = if j + 1 < n {
                let v = mids[j];
                let u = (v - comp.mean) / sd;
                let (cd, pd) = (normal_cdf(u), normal_pdf(u));
                (
                    cd,
                    comp.mean * cd - sd * pd,
                    m2_full * cd - sd * (v + comp.mean) * pd,
                )
            } else {
                (1.0, comp.mean, m2_full)
            };
            let g = grid[j];
            total +=
                comp.weight * ((m2_hi - m2_lo) - 2.0 * g * (m1_hi - m1_lo) + g * g * (f_hi - f_lo));
            f_lo = f_hi;
            m1_lo = m1_hi;
            m2_lo = m2_hi;
        }
    }
    total
}

/// Gradient of the distortion: `2 (g_j dF_j - dM1_j)` per codeword.
fn gradient(grid: &[f64], stats: &CellStats) -> Vec<f64> {
    grid.iter()
        .zip(stats.d_f.iter().zip(&stats.d_m1))
        .map(|(&g, (&df, &dm1))| 2.0 * (g * df - dm1))
        .collect()
}

fn is_strictly_increasing(grid: &[f64]) -> bool {
    grid.windows(2).all(|w| w[1] > w[0])
}

/// Lloyd sweep: each codeword moves to the conditional mean of its cell.
/// Cells are ordered intervals, so the updated grid stays nondecreasing.
fn lloyd_candidate(grid: &[f64], stats: &CellStats) -> Vec<f64> {
    grid.iter()
        .zip(stats.d_f.iter().zip(&stats.d_m1))
        .map(|(&g, (&df, &dm1))| if df > 1e-300 { dm1 / df } else { g })
        .collect()
}

/// Runs the optimizer and returns the stationary grid.
///
/// Converged when the gradient sup-norm drops below `1e-9` times the
/// mixture scale; errors out after 200 iterations with the residual norm
/// and the last grid in the message.
pub fn optimize_codewords(mix: &[MixtureComponent], n: usize, init: &[f64]) -> Result<Vec<f64>> {
    optimize_codewords_traced(mix, n, init).map(|(grid, _)| grid)
}

/// Same as [`optimize_codewords`] but also returns the distortion after
/// each accepted iterate, which the property tests assert is nonincreasing.
pub fn optimize_codewords_traced(
    mix: &[MixtureComponent],
    n: usize,
    init: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::domain("optimize_codewords", "N must be >= 1"));
    }
    if init.len() != n {
        return Err(Error::GridMismatch(format!(
            "init has {} points, expected {n}",
            init.len()
        )));
    }
    if !is_strictly_increasing(init) {
        return Err(Error::domain(
            "optimize_codewords",
            "init grid must be strictly increasing",
        ));
    }
    let wsum: f64 = mix.iter().map(|c| c.weight).sum();
    if (wsum - 1.0).abs() > 1e-9 {
        return Err(Error::domain(
            "optimize_codewords",
            format!("mixture weights sum to {wsum}"),
        ));
    }

    let (mmean, msd) = mixture_mean_sd(mix);
    let scale = msd + mmean.abs();

    // a single codeword sits at the mixture mean
    if n == 1 {
        return Ok((vec![mmean], vec![distortion(mix, &[mmean])]));
    }

    let mut grid = init.to_vec();
    let mut dist = distortion(mix, &grid);
    let mut trace = vec![dist];
    let mut grad_norm = f64::INFINITY;

    for _ in 0..MAX_ITER {
        let stats = cell_stats(mix, &grid);
        let grad = gradient(&grid, &stats);
        grad_norm = grad.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
        if grad_norm <= GRAD_TOL * scale {
            return Ok((grid, trace));
        }

        // symmetric tridiagonal Hessian: cell mass on the diagonal plus
        // the midpoint motion terms coupling neighbouring codewords
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)]; // H_{j, j+1}
        for j in 0..n {
            let mut h = 2.0 * stats.d_f[j];
            if j + 1 < n {
                let half_gap = 0.5 * (grid[j + 1] - grid[j]);
                h -= half_gap * stats.pdf_mid[j];
                off[j] = -half_gap * stats.pdf_mid[j];
            }
            if j > 0 {
                h -= 0.5 * (grid[j] - grid[j - 1]) * stats.pdf_mid[j - 1];
            }
            diag[j] = h;
        }

        let moved = |cand: &[f64], from: &[f64]| {
            cand.iter()
                .zip(from)
                .any(|(a, b)| (a - b).abs() > 1e-16 * scale)
        };

        let mut accepted = false;
        if let Some(step) = solve_tridiagonal(&diag, &off, &grad) {
            let mut damping = 1.0;
            for _ in 0..25 {
                let cand: Vec<f64> = grid
                    .iter()
                    .zip(&step)
                    .map(|(&g, &s)| g - damping * s)
                    .collect();
                if !moved(&cand, &grid) {
                    break; // Newton stalls here
                }
                if is_strictly_increasing(&cand) {
                    let cand_dist = distortion(mix, &cand);
                    if cand_dist <= dist * (1.0 + 1e-12) {
                        grid = cand;
                        dist = cand_dist;
                        trace.push(dist);
                        accepted = true;
                        break;
                    }
                }
                damping *= 0.5;
            }
        }

        if !accepted {
            let cand = lloyd_candidate(&grid, &stats);
            if !is_strictly_increasing(&cand) || !moved(&cand, &grid) {
                break;
            }
            let cand_dist = distortion(mix, &cand);
            if cand_dist > dist * (1.0 + 1e-12) {
                break;
            }
            grid = cand;
            dist = cand_dist;
            trace.push(dist);
        }
    }

    let stats = cell_stats(mix, &grid);
    let final_norm = gradient(&grid, &stats)
        .iter()
        .fold(0.0_f64, |m, g| m.max(g.abs()));
    if final_norm <= GRAD_TOL * scale {
        return Ok((grid, trace));
    }
    Err(Error::NoConvergence {
        routine: "optimize_codewords",
        iterations: MAX_ITER,
        residual: grad_norm.max(final_norm),
    })
}

/// Thomas solve of the symmetric tridiagonal system `H x = b`; `None`
/// when a pivot is not safely positive (indefinite far-field Hessian).
fn solve_tridiagonal(diag: &[f64], off: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    if n == 1 {
        return if diag[0] > 1e-300 {
            Some(vec![b[0] / diag[0]])
        } else {
            None
        };
    }
    let mut c_prime = vec![0.0; n - 1];
    let mut d_prime = vec![0.0; n];
    let mut denom = diag[0];
    if denom <= 1e-300 {
        return None;
    }
    c_prime[0] = off[0] / denom;
    d_prime[0] = b[0] / denom;
    for j in 1..n {
        denom = diag[j] - off[j - 1] * c_prime[j - 1];
        if denom <= 1e-300 {
            return None;
        }
        if j < n - 1 {
            c_prime[j] = off[j] / denom;
        }
        d_prime[j] = (b[j] - off[j - 1] * d_prime[j - 1]) / denom;
    }
    let mut x = d_prime;
    for j in (0..n - 1).rev() {
        let next = x[j + 1];
        x[j] -= c_prime[j] * next;
    }
    Some(x)
}

/// Companion probabilities: mixture mass of each Voronoi cell.
pub fn companion_probs(mix: &[MixtureComponent], codewords: &[f64]) -> Vec<f64> {
    cell_stats(mix, codewords).d_f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(mean: f64, var: f64) -> Vec<MixtureComponent> {
        vec![MixtureComponent {
            mean,
            var,
            weight: 1.0,
        }]
    }

    fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn single_codeword_is_mixture_mean() {
        let mix = vec![
            MixtureComponent {
                mean: -1.0,
                var: 0.5,
                weight: 0.25,
            },
            MixtureComponent {
                mean: 2.0,
                var: 1.5,
                weight: 0.75,
            },
        ];
        let (grid, _) = optimize_codewords_traced(&mix, 1, &[0.0]).unwrap();
        assert!((grid[0] - (-0.25 + 0.75 * 2.0)).abs() < 1e-12);
    }

    #[test]
    fn two_point_standard_normal() {
        // optimal pair is +/- sqrt(2/pi)
        let mix = gaussian(0.0, 1.0);
        let grid = optimize_codewords(&mix, 2, &[-1.5, 1.5]).unwrap();
        let expect = (2.0 / std::f64::consts::PI).sqrt();
        assert!((grid[0] + expect).abs() < 1e-9, "{grid:?}");
        assert!((grid[1] - expect).abs() < 1e-9);
    }

    #[test]
    fn symmetric_mixture_symmetric_grid() {
        let mix = vec![
            MixtureComponent {
                mean: -2.0,
                var: 1.0,
                weight: 0.5,
            },
            MixtureComponent {
                mean: 2.0,
                var: 1.0,
                weight: 0.5,
            },
        ];
        let grid = optimize_codewords(&mix, 8, &linspace(-5.0, 5.0, 8)).unwrap();
        for j in 0..8 {
            assert!(
                (grid[j] + grid[7 - j]).abs() < 1e-9,
                "not symmetric: {grid:?}"
            );
        }
    }

    #[test]
    fn distortion_trace_nonincreasing() {
        let mix = vec![
            MixtureComponent {
                mean: 0.0,
                var: 0.3,
                weight: 0.4,
            },
            MixtureComponent {
                mean: 3.0,
                var: 2.0,
                weight: 0.6,
            },
        ];
        let (_, trace) = optimize_codewords_traced(&mix, 12, &linspace(-2.0, 7.0, 12)).unwrap();
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12), "distortion rose: {trace:?}");
        }
    }

    #[test]
    fn distortion_beats_initial_grid() {
        let mix = gaussian(10.0, 4.0);
        let init = linspace(4.0, 16.0, 20);
        let d0 = distortion(&mix, &init);
        let grid = optimize_codewords(&mix, 20, &init).unwrap();
        assert!(distortion(&mix, &grid) <= d0);
    }

    #[test]
    fn stationarity_of_returned_grid() {
        // gradient components vanish at the optimum
        let mix = vec![
            MixtureComponent {
                mean: 1.0,
                var: 0.7,
                weight: 0.3,
            },
            MixtureComponent {
                mean: 4.0,
                var: 1.2,
                weight: 0.7,
            },
        ];
        let grid = optimize_codewords(&mix, 15, &linspace(-2.0, 9.0, 15)).unwrap();
        let stats = cell_stats(&mix, &grid);
        for (j, (&g, (&df, &dm1))) in grid
            .iter()
            .zip(stats.d_f.iter().zip(&stats.d_m1))
            .enumerate()
        {
            assert!(
                (2.0 * (g * df - dm1)).abs() < 1e-8,
                "component {j} not stationary"
            );
        }
    }

    #[test]
    fn companion_probs_sum_to_one() {
        let mix = vec![
            MixtureComponent {
                mean: 0.0,
                var: 1.0,
                weight: 0.5,
            },
            MixtureComponent {
                mean: 2.0,
                var: 0.5,
                weight: 0.5,
            },
        ];
        let grid = optimize_codewords(&mix, 10, &linspace(-3.0, 5.0, 10)).unwrap();
        let probs = companion_probs(&mix, &grid);
        let sum: f64 = probs.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(probs.iter().all(|&p| p >= 0.0));
        // two-point symmetric case splits mass evenly
        let probs2 = companion_probs(&gaussian(0.0, 1.0), &[-0.8, 0.8]);
        assert!((probs2[0] - 0.5).abs() < 1e-14);
        // one-point case carries all mass
        let probs1 = companion_probs(&gaussian(0.0, 1.0), &[0.0]);
        assert_eq!(probs1[0], 1.0);
    }

    #[test]
    fn four_point_two_component_against_quadrature() {
        // companion probabilities against direct quadrature of the mixture
        // density over the Voronoi cells
        let mix = vec![
            MixtureComponent {
                mean: -1.0,
                var: 0.25,
                weight: 0.5,
            },
            MixtureComponent {
                mean: 1.5,
                var: 1.0,
                weight: 0.5,
            },
        ];
        let grid = optimize_codewords(&mix, 4, &linspace(-2.0, 4.0, 4)).unwrap();
        let probs = companion_probs(&mix, &grid);
        let density = |z: f64| {
            mix.iter()
                .map(|c| {
                    let sd = c.var.sqrt();
                    c.weight * normal_pdf((z - c.mean) / sd) / sd
                })
                .sum::<f64>()
        };
        let mids = midpoints(&grid);
        for j in 0..4 {
            let lo = if j == 0 { -60.0 } else { mids[j - 1] };
            let hi = if j == 3 { 60.0 } else { mids[j] };
            let q = crate::quad::integrate(density, lo, hi, 1e-12);
            assert!((probs[j] - q).abs() < 1e-9, "cell {j}: {} vs {q}", probs[j]);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mix = gaussian(0.0, 1.0);
        assert!(optimize_codewords(&mix, 0, &[]).is_err());
        assert!(optimize_codewords(&mix, 2, &[1.0]).is_err());
        assert!(optimize_codewords(&mix, 2, &[1.0, 0.5]).is_err());
    }
}
