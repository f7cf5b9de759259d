//! Grid pricers on quantization output: European options, Bermudan options
//! by backward induction, hybrid-model zero-coupon bonds and bond options.
//!
//! Everything is benchmarked: node values are payoffs divided by the node
//! numeraire, so no explicit discounting appears outside the stochastic
//! rate accrual factors of the hybrid recursions.

use crate::analytic::{mpor_component_state, EuropeanSpec, KummerBondParams, OptionKind};
use crate::error::{Error, Result};
use crate::models::{Rate32Params, SavingsAccount, TcevParams};
use crate::quantize::{JointQuantGrid, QuantGrid};
use rayon::prelude::*;

/// A Bermudan contract: exercise dates, strike and side.
#[derive(Debug, Clone)]
pub struct BermudanSpec {
    /// Strictly increasing exercise times; the last one is the maturity.
    pub exercise_times: Vec<f64>,
    pub strike: f64,
    pub kind: OptionKind,
}

impl BermudanSpec {
    pub fn new(exercise_times: Vec<f64>, strike: f64, kind: OptionKind) -> Result<Self> {
        if exercise_times.is_empty() {
            return Err(Error::domain("BermudanSpec", "no exercise dates"));
        }
        if !exercise_times.windows(2).all(|w| w[1] > w[0]) || exercise_times[0] <= 0.0 {
            return Err(Error::domain(
                "BermudanSpec",
                "exercise dates must be strictly increasing and positive",
            ));
        }
        if !(strike >= 0.0) {
            return Err(Error::domain("BermudanSpec", "strike must be >= 0"));
        }
        Ok(BermudanSpec {
            exercise_times,
            strike,
            kind,
        })
    }

    pub fn maturity(&self) -> f64 {
        *self.exercise_times.last().expect("nonempty")
    }
}

/// A European option on a zero-coupon bond: option expiry `T`, bond
/// maturity `S > T`, strike on the bond price.
#[derive(Debug, Clone, Copy)]
pub struct BondOptionSpec {
    pub expiry: f64,
    pub bond_maturity: f64,
    pub strike: f64,
}

impl BondOptionSpec {
    pub fn new(expiry: f64, bond_maturity: f64, strike: f64) -> Result<Self> {
        if !(bond_maturity > expiry && expiry > 0.0) {
            return Err(Error::domain(
                "BondOptionSpec",
                format!("need S = {bond_maturity} > T = {expiry} > 0"),
            ));
        }
        if !(strike >= 0.0) {
            return Err(Error::domain("BondOptionSpec", "strike must be >= 0"));
        }
        Ok(BondOptionSpec {
            expiry,
            bond_maturity,
            strike,
        })
    }
}

fn intrinsic(kind: OptionKind, s: f64, k: f64) -> f64 {
    match kind {
        OptionKind::Put => (k - s).max(0.0),
        OptionKind::Call => (s - k).max(0.0),
    }
}

/// Real-world price of a payoff of the terminal GOP read off a marginal
/// grid: `S_0 sum_j p_j payoff(beta_T gamma_j) / (beta_T gamma_j)`.
pub fn benchmarked_expectation_rmq(
    grid: &QuantGrid,
    p: &TcevParams,
    r: f64,
    expiry: f64,
    payoff: impl Fn(f64) -> f64,
) -> Result<f64> {
    let k = grid.step_index(expiry)?;
    let beta = SavingsAccount::new(r).beta(expiry);
    let step = &grid.steps[k];
    let mut acc = 0.0;
    for (&g, &q) in step.codewords.iter().zip(&step.probs) {
        let gop = beta * g;
        acc += q * payoff(gop) / gop;
    }
    Ok(p.x0 * acc)
}

/// European option price from a marginal RMQ grid. The expiry must lie on
/// the grid: the forward recursion makes the step-k marginal identical to
/// the terminal marginal of a grid built only out to that time.
pub fn european_price_rmq(
    grid: &QuantGrid,
    p: &TcevParams,
    r: f64,
    spec: &EuropeanSpec,
) -> Result<f64> {
    if spec.t != 0.0 {
        return Err(Error::GridMismatch(
            "grid pricing values at the grid start (t = 0)".into(),
        ));
    }
    benchmarked_expectation_rmq(grid, p, r, spec.expiry, |s| {
        intrinsic(spec.kind, s, spec.strike)
    })
}

/// Bermudan option by backward induction on benchmarked values over the
/// grid transitions. Every exercise date must coincide with a grid time.
pub fn bermudan_price_rmq(
    grid: &QuantGrid,
    p: &TcevParams,
    r: f64,
    spec: &BermudanSpec,
) -> Result<f64> {
    let beta = SavingsAccount::new(r);
    let mut exercise_at = vec![false; grid.times.len()];
    for &te in &spec.exercise_times {
        let k = grid
            .step_index(te)
            .map_err(|_| Error::GridMismatch(format!("exercise time {te} is not a grid time")))?;
        exercise_at[k] = true;
    }
    let k_last = grid.step_index(spec.maturity())?;

    let exercise_layer = |k: usize| -> Vec<f64> {
        let b = beta.beta(grid.times[k]);
        grid.steps[k]
            .codewords
            .iter()
            .map(|&g| {
                let gop = b * g;
                intrinsic(spec.kind, gop, spec.strike) / gop
            })
            .collect()
    };

    let mut values = exercise_layer(k_last);
    for k in (0..k_last).rev() {
        values = grid.trans[k].pull_back(&values);
        if exercise_at[k] {
            for (v, e) in values.iter_mut().zip(exercise_layer(k)) {
                *v = v.max(e);
            }
        }
    }
    debug_assert_eq!(values.len(), 1);
    Ok(p.x0 * values[0])
}

/// One backward sweep of the benchmarked hybrid recursion from the layer
/// `values` over step `k + 1` nodes to step `k` nodes:
/// `H_k(i, m) = e^{-r_i dt} x_m sum T[(i,m),(j,n)] H_{k+1}(j, n) / x_n`.
fn hybrid_sweep(jgrid: &JointQuantGrid, k: usize, dt: f64, values: &[f64]) -> Vec<f64> {
    let (r_cur, x_cur) = jgrid.nodes(k);
    let (_, x_next) = jgrid.nodes(k + 1);
    let n_x_next = x_next.len();
    // divide by the target state once
    let ratio: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(idx, &v)| v / x_next[idx % n_x_next])
        .collect();

    if jgrid.rho == 0.0 {
        // factorized contraction: first over the gop transition, then the rate
        let tr = &jgrid.rate.trans[k];
        let tx = &jgrid.gop.trans[k];
        let n_r_next = tr.n_to;
        // a[j][m] = sum_n Tx[m][n] ratio[j][n]
        let mut a = vec![0.0; n_r_next * x_cur.len()];
        for j in 0..n_r_next {
            let slice = &ratio[j * n_x_next..(j + 1) * n_x_next];
            for (m, am) in a[j * x_cur.len()..(j + 1) * x_cur.len()]
                .iter_mut()
                .enumerate()
            {
                *am = tx.row(m).iter().zip(slice).map(|(&t, &v)| t * v).sum();
            }
        }
        let mut out = vec![0.0; r_cur.len() * x_cur.len()];
        out.par_chunks_mut(x_cur.len())
            .enumerate()
            .for_each(|(i, row)| {
                let disc = (-r_cur[i] * dt).exp();
                let trow = tr.row(i);
                for (m, o) in row.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for (j, &tj) in trow.iter().enumerate() {
                        s += tj * a[j * x_cur.len() + m];
                    }
                    *o = disc * x_cur[m] * s;
                }
            });
        out
    } else {
        let n_x_cur = x_cur.len();
        (0..r_cur.len() * n_x_cur)
            .into_par_iter()
            .map(|node| {
                let (i, m) = (node / n_x_cur, node % n_x_cur);
                let mut s = 0.0;
                jgrid.for_each_transition(k, i, m, |j, n, w| {
                    s += w * ratio[j * n_x_next + n];
                });
                (-r_cur[i] * dt).exp() * x_cur[m] * s
            })
            .collect()
    }
}

/// Benchmarked price of a payoff of the step-`k_end` node indices
/// `(rate index, gop index)`, carried back to time zero with
/// left-endpoint rate accrual.
fn hybrid_backward(
    jgrid: &JointQuantGrid,
    k_end: usize,
    terminal: impl Fn(usize, usize) -> f64 + Sync,
) -> f64 {
    let dt = jgrid.times[1] - jgrid.times[0];
    let (r_end, x_end) = jgrid.nodes(k_end);
    let n_x = x_end.len();
    let mut values: Vec<f64> = (0..r_end.len() * n_x)
        .map(|node| terminal(node / n_x, node % n_x))
        .collect();
    for k in (0..k_end).rev() {
        values = hybrid_sweep(jgrid, k, dt, &values);
    }
    debug_assert_eq!(values.len(), 1);
    values[0]
}

/// Fair zero-coupon bond from the joint grid:
/// `E[(xbar_0/xbar_T) exp(-int_0^T r)]` discretized with left-endpoint
/// accrual.
pub fn hybrid_zcb_rmq(jgrid: &JointQuantGrid, expiry: f64) -> Result<f64> {
    let k_end = jgrid.step_index(expiry)?;
    if k_end == 0 {
        return Ok(1.0);
    }
    Ok(hybrid_backward(jgrid, k_end, |_, _| 1.0))
}

/// Fair bond curve at every grid time up to `expiry` in one forward pass.
/// At zero correlation the rate and GOP legs factorize; otherwise a
/// benchmarked occupation measure
/// `W_k(i, m) = E[e^{-sum_{l<k} r_l dt} (x_0 / x_k) 1{state_k = (i,m)}]`
/// is carried forward, and the bond maturing at `t_k` is its total mass.
pub fn hybrid_zcb_curve_rmq(jgrid: &JointQuantGrid, expiry: f64) -> Result<Vec<(f64, f64)>> {
    let k_end = jgrid.step_index(expiry)?;
    let dt = jgrid.times[1] - jgrid.times[0];
    if jgrid.rho != 0.0 {
        let mut w = vec![1.0_f64];
        let mut out = Vec::with_capacity(k_end);
        for k in 0..k_end {
            let (r_cur, x_cur) = jgrid.nodes(k);
            let (_, x_next) = jgrid.nodes(k + 1);
            let n_x_cur = x_cur.len();
            let n_x_next = x_next.len();
            let source: Vec<f64> = w
                .iter()
                .enumerate()
                .map(|(node, &wv)| {
                    let (i, m) = (node / n_x_cur, node % n_x_cur);
                    wv * (-r_cur[i] * dt).exp() * x_cur[m]
                })
                .collect();
            let next = source
                .par_iter()
                .enumerate()
                .filter(|(_, &s)| s != 0.0)
                .fold(
                    || vec![0.0; jgrid.rate.steps[k + 1].codewords.len() * n_x_next],
                    |mut acc, (node, &s)| {
                        let (i, m) = (node / n_x_cur, node % n_x_cur);
                        jgrid.for_each_transition(k, i, m, |j, n, p| {
                            acc[j * n_x_next + n] += s * p;
                        });
                        acc
                    },
                )
                .reduce(
                    || vec![0.0; jgrid.rate.steps[k + 1].codewords.len() * n_x_next],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x += y;
                        }
                        a
                    },
                );
            w = next
                .into_iter()
                .enumerate()
                .map(|(node, v)| v / x_next[node % n_x_next])
                .collect();
            out.push((jgrid.times[k + 1], w.iter().sum()));
        }
        return Ok(out);
    }
    // rate leg: q_k(j) = E[e^{-sum r dt} 1{r_k = j}]; gop leg via marginals
    let mut q = vec![1.0_f64];
    let mut out = Vec::with_capacity(k_end);
    for k in 0..k_end {
        let r_cur = &jgrid.rate.steps[k].codewords;
        let weighted: Vec<f64> = q
            .iter()
            .zip(r_cur)
            .map(|(&qi, &r)| qi * (-r * dt).exp())
            .collect();
        q = jgrid.rate.trans[k].push_forward(&weighted);
        let ir: f64 = q.iter().sum();
        let gop_step = &jgrid.gop.steps[k + 1];
        let x0 = jgrid.gop.steps[0].codewords[0];
        let mpor: f64 = gop_step
            .codewords
            .iter()
            .zip(&gop_step.probs)
            .map(|(&x, &p)| p * x0 / x)
            .sum();
        out.push((jgrid.times[k + 1], ir * mpor));
    }
    Ok(out)
}

/// European put on a fair zero-coupon bond under the hybrid model. The
/// inner bond price at expiry uses the independence form `M G` at the
/// node state.
pub fn zcb_option_price_rmq(
    jgrid: &JointQuantGrid,
    p_rate: &Rate32Params,
    p_tcev: &TcevParams,
    spec: &BondOptionSpec,
) -> Result<f64> {
    zcb_option_rmq_kind(jgrid, p_rate, p_tcev, spec, OptionKind::Put)
}

fn zcb_option_rmq_kind(
    jgrid: &JointQuantGrid,
    p_rate: &Rate32Params,
    p_tcev: &TcevParams,
    spec: &BondOptionSpec,
    kind: OptionKind,
) -> Result<f64> {
    let k_end = jgrid.step_index(spec.expiry)?;
    if spec.strike == 0.0 && kind == OptionKind::Put {
        return Ok(0.0);
    }
    let kummer = KummerBondParams::new(p_rate)?;
    let (t_opt, t_bond) = (spec.expiry, spec.bond_maturity);
    // cache the bond factors on the expiry-layer marginal codewords
    let (r_end, x_end) = jgrid.nodes(k_end);
    let g_vals: Vec<f64> = r_end
        .iter()
        .map(|&r| kummer.g(r, t_opt, t_bond))
        .collect::<Result<_>>()?;
    let m_vals: Vec<f64> = x_end
        .iter()
        .map(|&x| mpor_component_state(p_tcev, x, t_opt, t_bond))
        .collect::<Result<_>>()?;
    Ok(hybrid_backward(jgrid, k_end, |i, m| {
        intrinsic(kind, m_vals[m] * g_vals[i], spec.strike)
    }))
}

/// Real-world and hypothetical risk-neutral bond-option prices side by
/// side: `(rw_put, rn_put, rw_call, rn_call)`. The risk-neutral variants
/// set the MPOR component to one (bond = `G`) and discount purely on the
/// rate grid.
pub fn rn_bond_option_comparators(
    jgrid: &JointQuantGrid,
    p_rate: &Rate32Params,
    p_tcev: &TcevParams,
    spec: &BondOptionSpec,
) -> Result<(f64, f64, f64, f64)> {
    let rw_put = zcb_option_rmq_kind(jgrid, p_rate, p_tcev, spec, OptionKind::Put)?;
    let rw_call = zcb_option_rmq_kind(jgrid, p_rate, p_tcev, spec, OptionKind::Call)?;

    let k_end = jgrid.step_index(spec.expiry)?;
    let kummer = KummerBondParams::new(p_rate)?;
    let dt = jgrid.times[1] - jgrid.times[0];
    let rate_layer = |kind: OptionKind| -> Result<f64> {
        let r_end = &jgrid.rate.steps[k_end].codewords;
        let mut values: Vec<f64> = r_end
            .iter()
            .map(|&r| {
                Ok(intrinsic(
                    kind,
                    kummer.g(r, spec.expiry, spec.bond_maturity)?,
                    spec.strike,
                ))
            })
            .collect::<Result<_>>()?;
        for k in (0..k_end).rev() {
            values = jgrid.rate.trans[k].pull_back(&values);
            for (v, &r) in values.iter_mut().zip(&jgrid.rate.steps[k].codewords) {
                *v *= (-r * dt).exp();
            }
        }
        Ok(values[0])
    };
    let rn_put = rate_layer(OptionKind::Put)?;
    let rn_call = rate_layer(OptionKind::Call)?;
    Ok((rw_put, rn_put, rw_call, rn_call))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::real_world_call;
    use crate::models::{paper_rate32, paper_tcev};
    use crate::quantize::{joint_rmq_build, rmq_build, GaussianSurrogate};

    const R: f64 = 0.05;

    fn tcev_grid(horizon: f64, spy: usize, n: usize) -> (TcevParams, QuantGrid) {
        let p = paper_tcev();
        let s = GaussianSurrogate::tcev_euler(&p);
        (p, rmq_build(&s, p.x0, horizon, spy, n).unwrap())
    }

    #[test]
    fn numeraire_payoff_prices_to_spot() {
        let (p, grid) = tcev_grid(2.0, 12, 30);
        let v = benchmarked_expectation_rmq(&grid, &p, R, 2.0, |s| s).unwrap();
        assert!((v - p.x0).abs() < 1e-12 * p.x0);
    }

    #[test]
    fn zero_strike_put_is_worthless() {
        let (p, grid) = tcev_grid(1.0, 12, 20);
        let spec = EuropeanSpec::new(0.0, 1.0, 0.0, OptionKind::Put).unwrap();
        assert_eq!(european_price_rmq(&grid, &p, R, &spec).unwrap(), 0.0);
    }

    #[test]
    fn european_rmq_tracks_analytic() {
        let (p, grid) = tcev_grid(10.0, 24, 50);
        for &mny in &[0.8, 1.0, 1.2] {
            let k = mny * p.x0;
            let cs = EuropeanSpec::new(0.0, 10.0, k, OptionKind::Call).unwrap();
            let rmq = european_price_rmq(&grid, &p, R, &cs).unwrap();
            let ana = real_world_call(&p, R, &cs).unwrap();
            assert!(
                ((rmq - ana) / ana).abs() < 5e-3,
                "moneyness {mny}: rmq {rmq} vs analytic {ana}"
            );
        }
    }

    #[test]
    fn bermudan_single_date_equals_european() {
        let (p, grid) = tcev_grid(3.0, 12, 30);
        let strike = 45.0;
        let bs = BermudanSpec::new(vec![3.0], strike, OptionKind::Put).unwrap();
        let es = EuropeanSpec::new(0.0, 3.0, strike, OptionKind::Put).unwrap();
        let b = bermudan_price_rmq(&grid, &p, R, &bs).unwrap();
        let e = european_price_rmq(&grid, &p, R, &es).unwrap();
        assert!((b - e).abs() < 1e-12 * e.max(1.0), "{b} vs {e}");
    }

    #[test]
    fn bermudan_dominates_european_and_grows_with_dates() {
        let (p, grid) = tcev_grid(2.0, 12, 40);
        let strike = 55.0;
        let es = EuropeanSpec::new(0.0, 2.0, strike, OptionKind::Put).unwrap();
        let european = european_price_rmq(&grid, &p, R, &es).unwrap();
        let annual = BermudanSpec::new(vec![1.0, 2.0], strike, OptionKind::Put).unwrap();
        let semi = BermudanSpec::new(vec![0.5, 1.0, 1.5, 2.0], strike, OptionKind::Put).unwrap();
        let quarterly = BermudanSpec::new(
            (1..=8).map(|i| 0.25 * i as f64).collect(),
            strike,
            OptionKind::Put,
        )
        .unwrap();
        let va = bermudan_price_rmq(&grid, &p, R, &annual).unwrap();
        let vs = bermudan_price_rmq(&grid, &p, R, &semi).unwrap();
        let vq = bermudan_price_rmq(&grid, &p, R, &quarterly).unwrap();
        assert!(va >= european - 1e-12);
        assert!(vs >= va - 1e-12, "semi {vs} vs annual {va}");
        assert!(vq >= vs - 1e-12, "quarterly {vq} vs semi {vs}");
    }

    #[test]
    fn bermudan_rejects_misaligned_dates() {
        let (p, grid) = tcev_grid(1.0, 12, 10);
        let bs = BermudanSpec::new(vec![0.51], 50.0, OptionKind::Put).unwrap();
        assert!(matches!(
            bermudan_price_rmq(&grid, &p, R, &bs),
            Err(Error::GridMismatch(_))
        ));
    }

    fn small_jgrid(rho: f64, horizon: f64) -> (Rate32Params, TcevParams, JointQuantGrid) {
        let pr = paper_rate32();
        let pt = paper_tcev();
        let g = joint_rmq_build(
            &GaussianSurrogate::rate32_euler(&pr),
            &GaussianSurrogate::tcev_euler(&pt),
            rho,
            pr.r0,
            pt.x0,
            horizon,
            6,
            15,
            25,
        )
        .unwrap();
        (pr, pt, g)
    }

    #[test]
    fn hybrid_zcb_close_to_analytic_product() {
        let (pr, pt, g) = small_jgrid(0.0, 5.0);
        let rmq = hybrid_zcb_rmq(&g, 5.0).unwrap();
        let ana = crate::analytic::hybrid_zcb(&pt, &pr, 0.0, 5.0).unwrap();
        assert!(
            ((rmq - ana) / ana).abs() < 0.01,
            "rmq {rmq} vs analytic {ana}"
        );
        assert_eq!(hybrid_zcb_rmq(&g, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn forward_curve_matches_backward_price() {
        let (_, _, g) = small_jgrid(0.45, 2.0);
        let curve = hybrid_zcb_curve_rmq(&g, 2.0).unwrap();
        for &(t, v) in curve.iter().filter(|(t, _)| (t * 2.0).fract().abs() < 1e-9) {
            let direct = hybrid_zcb_rmq(&g, t).unwrap();
            assert!(
                (v - direct).abs() < 1e-12 * direct,
                "t = {t}: forward {v} vs backward {direct}"
            );
        }
    }

    #[test]
    fn hybrid_zcb_correlated_recursion_agrees_at_zero_rho() {
        // the windowed bivariate path at rho ~ 0 must reproduce the
        // factorized contraction
        let (_, _, g0) = small_jgrid(0.0, 2.0);
        let (_, _, g_eps) = small_jgrid(1e-12, 2.0);
        let a = hybrid_zcb_rmq(&g0, 2.0).unwrap();
        let b = hybrid_zcb_rmq(&g_eps, 2.0).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn zero_rate_degenerate_hybrid_tends_to_mpor() {
        let pr = Rate32Params::new(1.0, 1e-9, 1e-6, 1e-9).unwrap();
        let pt = paper_tcev();
        let g = joint_rmq_build(
            &GaussianSurrogate::rate32_euler(&pr),
            &GaussianSurrogate::tcev_euler(&pt),
            0.0,
            pr.r0,
            pt.x0,
            5.0,
            6,
            3,
            30,
        )
        .unwrap();
        let rmq = hybrid_zcb_rmq(&g, 5.0).unwrap();
        let m = crate::analytic::mpor_component(&pt, 0.0, 5.0).unwrap();
        assert!(((rmq - m) / m).abs() < 0.01, "rmq {rmq} vs mpor {m}");
    }

    #[test]
    fn bond_put_zero_strike_and_monotone_convex_in_strike() {
        let (pr, pt, g) = small_jgrid(0.0, 3.0);
        let spec0 = BondOptionSpec::new(3.0, 8.0, 0.0).unwrap();
        assert_eq!(zcb_option_price_rmq(&g, &pr, &pt, &spec0).unwrap(), 0.0);
        let fwd = crate::analytic::hybrid_zcb(&pt, &pr, 0.0, 8.0).unwrap()
            / crate::analytic::hybrid_zcb(&pt, &pr, 0.0, 3.0).unwrap();
        let prices: Vec<f64> = (0..20)
            .map(|i| {
                let k = fwd * (0.6 + 0.05 * i as f64);
                let spec = BondOptionSpec::new(3.0, 8.0, k).unwrap();
                zcb_option_price_rmq(&g, &pr, &pt, &spec).unwrap()
            })
            .collect();
        for w in prices.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "not nondecreasing: {prices:?}");
        }
        for w in prices.windows(3) {
            assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-10, "not convex: {prices:?}");
        }
    }

    #[test]
    fn rn_rw_option_asymmetry() {
        let (pr, pt, g) = small_jgrid(0.0, 5.0);
        let fwd = crate::analytic::hybrid_zcb(&pt, &pr, 0.0, 10.0).unwrap()
            / crate::analytic::hybrid_zcb(&pt, &pr, 0.0, 5.0).unwrap();
        for &mny in &[0.9, 1.0, 1.1] {
            let spec = BondOptionSpec::new(5.0, 10.0, fwd * mny).unwrap();
            let (rw_put, rn_put, rw_call, rn_call) =
                rn_bond_option_comparators(&g, &pr, &pt, &spec).unwrap();
            assert!(
                rw_put >= rn_put - 1e-10,
                "mny {mny}: rw_put {rw_put} < rn_put {rn_put}"
            );
            assert!(
                rw_call <= rn_call + 1e-10,
                "mny {mny}: rw_call {rw_call} > rn_call {rn_call}"
            );
        }
    }

    #[test]
    fn degenerate_gop_volatility_collapses_rn_rw_gap() {
        let pr = paper_rate32();
        let pt = TcevParams::new(51.34, 0.1239, 1e-4, 0.2868, 50.0).unwrap();
        let g = joint_rmq_build(
            &GaussianSurrogate::rate32_euler(&pr),
            &GaussianSurrogate::tcev_euler(&pt),
            0.0,
            pr.r0,
            pt.x0,
            2.0,
            6,
            15,
            5,
        )
        .unwrap();
        let fwd = crate::analytic::ir_component_32(&pr, 0.0, 4.0).unwrap()
            / crate::analytic::ir_component_32(&pr, 0.0, 2.0).unwrap();
        let spec = BondOptionSpec::new(2.0, 4.0, fwd).unwrap();
        let (rw_put, rn_put, rw_call, rn_call) =
            rn_bond_option_comparators(&g, &pr, &pt, &spec).unwrap();
        assert!(
            (rw_put - rn_put).abs() < 2e-4 * rn_put.max(1e-6),
            "puts {rw_put} vs {rn_put}"
        );
        assert!(
            (rw_call - rn_call).abs() < 2e-4 * rn_call.max(1e-6),
            "calls {rw_call} vs {rn_call}"
        );
    }
}
