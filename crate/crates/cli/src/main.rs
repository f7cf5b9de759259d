//! `benchpricer run <config.json> [--out DIR] [--seed N] [--method M]`
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

use benchpricer_cli::config::{MethodSel, RunConfig};
use benchpricer_cli::experiments::RunError;
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "usage: benchpricer run <config.json> [--out DIR] [--seed N] \
                     [--method analytic|rmq|mc|all]";

struct Args {
    config_path: PathBuf,
    out_dir: Option<PathBuf>,
    seed: Option<u64>,
    method: Option<MethodSel>,
}

fn parse_args(mut argv: impl Iterator<Item = String>) -> Result<Args, String> {
    match argv.next().as_deref() {
        Some("run") => {}
        Some("--version") => {
            println!("{}", benchpricer_cli::version_string());
            std::process::exit(0);
        }
        _ => return Err(USAGE.into()),
    }
    let config_path = PathBuf::from(argv.next().ok_or(USAGE)?);
    let mut args = Args {
        config_path,
        out_dir: None,
        seed: None,
        method: None,
    };
    while let Some(flag) = argv.next() {
        let value = argv
            .next()
            .ok_or_else(|| format!("{flag} needs a value\n{USAGE}"))?;
        match flag.as_str() {
            "--out" => args.out_dir = Some(PathBuf::from(value)),
            "--seed" => args.seed = Some(value.parse().map_err(|_| format!("bad seed '{value}'"))?),
            "--method" => args.method = Some(value.parse()?),
            other => return Err(format!("unknown flag '{other}'\n{USAGE}")),
        }
    }
    Ok(args)
}

fn main() -> ExitCode {
    // worker cap from the environment, before any rayon pool spins up
    if let Ok(threads) = std::env::var("BENCHPRICER_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        } else {
            eprintln!("benchpricer: ignoring unparsable BENCHPRICER_THREADS='{threads}'");
        }
    }

    let args = match parse_args(std::env::args().skip(1)) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("benchpricer: {msg}");
            return ExitCode::from(2);
        }
    };

    let text = match std::fs::read_to_string(&args.config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!(
                "benchpricer: cannot read {}: {e}",
                args.config_path.display()
            );
            return ExitCode::from(2);
        }
    };
    let cfg = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("benchpricer: invalid config: {e}");
            return ExitCode::from(2);
        }
    };

    let out_dir = args
        .out_dir
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    match benchpricer_cli::run_to_files(&cfg, &out_dir, args.seed, args.method) {
        Ok(paths) => {
            println!("wrote {}", paths.csv.display());
            println!("wrote {}", paths.manifest.display());
            ExitCode::SUCCESS
        }
        Err(RunError::Config(msg)) => {
            eprintln!("benchpricer: invalid config: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Numerical(msg)) => {
            eprintln!("benchpricer: numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
