//! Adaptive Gauss-Kronrod quadrature (G7-K15) on finite and half-infinite
//! intervals. Serves the oracle integrals in the test suites and the
//! density-integral route of the risk-neutral comparator prices.

/// Kronrod abscissae on [0, 1] side of the symmetric 15-point rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let fsum = f(c - dx) + f(c + dx);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kron * h, (kron - gauss).abs() * h.abs())
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (v, e) = gk15(f, a, b);
    if e <= tol || depth >= 48 {
        return v;
    }
    let c = 0.5 * (a + b);
    adaptive(f, a, c, tol / 2.0, depth + 1) + adaptive(f, c, b, tol / 2.0, depth + 1)
}

/// Integral of `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    adaptive(&f, a, b, abs_tol, 0)
}

/// Integral of `f` over `[a, inf)`, mapped to `[0, 1)` by
/// `x = a + t/(1-t)`. The integrand must decay at infinity.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, abs_tol: f64) -> f64 {
    let g = move |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let u = 1.0 - t;
        let v = f(a + t / u) / (u * u);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    adaptive(&g, 0.0, 1.0, abs_tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12);
        assert!((v - (81.0 / 4.0 - 1.0 / 4.0 - 2.0 * 4.0 + 4.0)).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_finite() {
        let v = integrate(|x| (10.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12);
        let exact = (1.0 - (10.0 * std::f64::consts::PI).cos()) / 10.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn gaussian_tail() {
        let v = integrate_to_inf(|x| (-x * x / 2.0).exp(), 0.0, 1e-12);
        assert!((v - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn shifted_exponential_tail() {
        let v = integrate_to_inf(|x| (-x).exp(), 3.0, 1e-13);
        assert!((v - (-3.0_f64).exp()).abs() < 1e-12);
    }
}
