use benchpricer_core::analytic::{self, EuropeanSpec, OptionKind};
use benchpricer_core::models::{paper_rate32, paper_tcev};
use benchpricer_core::pricers::{european_price_rmq, hybrid_zcb_curve_rmq};
use benchpricer_core::quantize::{joint_rmq_build, rmq_build, GaussianSurrogate};

fn main() {
    let p = paper_tcev();
    let pr = paper_rate32();
    let r = 0.05;

    // criterion 2: euler surface error at 24/y N=50
    for (spy, n) in [(24usize, 50usize), (12, 50)] {
        let t0 = std::time::Instant::now();
        let grid = rmq_build(&GaussianSurrogate::tcev_euler(&p), p.x0, 15.0, spy, n).unwrap();
        let mut max_err = 0.0_f64;
        let mut m = 120;
        while m <= 180 {
            let expiry = m as f64 / 12.0;
            for j in 0..9 {
                let strike = (0.8 + 0.05 * j as f64) * p.x0;
                let spec = EuropeanSpec::new(0.0, expiry, strike, OptionKind::Call).unwrap();
                let rmq = european_price_rmq(&grid, &p, r, &spec).unwrap();
                let ana = analytic::real_world_call(&p, r, &spec).unwrap();
                max_err = max_err.max(((rmq - ana) / ana).abs());
            }
            m += 1;
        }
        println!(
            "euler spy={spy} N={n}: max rel err {:.4}% ({:?})",
            100.0 * max_err,
            t0.elapsed()
        );
    }
    // weak2 at 12/y for comparison
    {
        let t0 = std::time::Instant::now();
        let grid = rmq_build(&GaussianSurrogate::tcev_weak2(&p), p.x0, 15.0, 12, 50).unwrap();
        let mut max_err = 0.0_f64;
        for m in 120..=180 {
            let expiry = m as f64 / 12.0;
            for j in 0..9 {
                let strike = (0.8 + 0.05 * j as f64) * p.x0;
                let spec = EuropeanSpec::new(0.0, expiry, strike, OptionKind::Call).unwrap();
                let rmq = european_price_rmq(&grid, &p, r, &spec).unwrap();
                let ana = analytic::real_world_call(&p, r, &spec).unwrap();
                max_err = max_err.max(((rmq - ana) / ana).abs());
            }
        }
        println!(
            "weak2 spy=12 N=50: max rel err {:.4}% ({:?})",
            100.0 * max_err,
            t0.elapsed()
        );
    }

    // criterion 4: hybrid curve at rho=0 vs analytic, various settings
    for (spy, nr, nx, tag) in [
        (12usize, 50usize, 150usize, "euler"),
        (24, 50, 150, "euler"),
        (48, 50, 150, "euler"),
        (12, 50, 150, "weak2"),
    ] {
        let t0 = std::time::Instant::now();
        let (rs, xs) = if tag == "weak2" {
            (
                GaussianSurrogate::rate32_weak2(&pr),
                GaussianSurrogate::tcev_weak2(&p),
            )
        } else {
            (
                GaussianSurrogate::rate32_euler(&pr),
                GaussianSurrogate::tcev_euler(&p),
            )
        };
        let jg = joint_rmq_build(&rs, &xs, 0.0, pr.r0, p.x0, 15.0, spy, nr, nx).unwrap();
        let curve = hybrid_zcb_curve_rmq(&jg, 15.0).unwrap();
        let mut max_err = 0.0_f64;
        let mut worst_t = 0.0;
        for (t, v) in curve {
            if (t * 12.0 - (t * 12.0).round()).abs() > 1e-9 {
                continue;
            }
            let ana = analytic::hybrid_zcb(&p, &pr, 0.0, t).unwrap();
            let e = ((v - ana) / ana).abs();
            if e > max_err {
                max_err = e;
                worst_t = t;
            }
        }
        println!(
            "{tag} spy={spy} {nr}x{nx}: max rel err {:.4}% at T={worst_t:.2} ({:?})",
            100.0 * max_err,
            t0.elapsed()
        );
    }
}
