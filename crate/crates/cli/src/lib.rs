//! Library surface of the experiment driver; the `benchpricer` binary is
//! a thin wrapper over [`run_to_files`].

// validation guards are negations (e.g. `!(rho.abs() < 1.0)`) so NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod output;

use config::{MethodSel, RunConfig};
use experiments::RunError;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Artifacts of a completed run.
pub struct RunPaths {
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

/// Executes the configured experiment and writes `<experiment>.csv` plus
/// `<experiment>.manifest.json` under `out_dir`.
pub fn run_to_files(
    cfg: &RunConfig,
    out_dir: &Path,
    seed_override: Option<u64>,
    method_override: Option<MethodSel>,
) -> Result<RunPaths, RunError> {
    let mut cfg = cfg.clone();
    if let Some(seed) = seed_override {
        cfg.numerics.seed = Some(seed);
    }
    if let Some(m) = method_override {
        cfg.method = m;
    }

    let started = Instant::now();
    let table = experiments::run(&cfg)?;
    let wall = started.elapsed();

    let resolved = cfg.resolve();
    let manifest = serde_json::json!({
        "experiment": cfg.experiment,
        "method": format!("{:?}", cfg.method).to_lowercase(),
        "parameters": {
            "tcev": cfg.tcev,
            "rate32": cfg.rate32,
            "short_rate": cfg.short_rate,
        },
        "numerics": resolved,
        "columns": table.columns,
        "rows": table.rows.len(),
        "seed": resolved.seed,
        "version": version_string(),
        "wall_time_seconds": wall.as_secs_f64(),
        "created_unix": std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    });

    let csv = out_dir.join(format!("{}.csv", cfg.experiment));
    let man = out_dir.join(format!("{}.manifest.json", cfg.experiment));
    let body =
        serde_json::to_string_pretty(&manifest).map_err(|e| RunError::Numerical(e.to_string()))?;
    output::write_atomic(&csv, table.to_csv().as_bytes())
        .map_err(|e| RunError::Numerical(format!("writing {}: {e}", csv.display())))?;
    if let Err(e) = output::write_atomic(&man, body.as_bytes()) {
        let _ = std::fs::remove_file(&csv); // never leave a partial pair behind
        return Err(RunError::Numerical(format!(
            "writing {}: {e}",
            man.display()
        )));
    }
    Ok(RunPaths { csv, manifest: man })
}

pub fn version_string() -> String {
    format!(
        "benchpricer {} ({})",
        env!("CARGO_PKG_VERSION"),
        option_env!("BENCHPRICER_BUILD").unwrap_or("source")
    )
}
