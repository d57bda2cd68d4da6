//! Parallel displacement scans. `MELFORGE_THREADS` caps the worker count.

use melforge_core::averaging::PerturbedOscillator;
use melforge_core::numlab::{
    cycles_from_scan, displacement_numeric, linspace, CycleSearch, DisplacementSample, IntegratorConfig,
};
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "MELFORGE_THREADS";

/// The worker count requested through the environment, if any.
pub fn thread_limit() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::input(format!(
                "{THREADS_ENV} must be a positive integer, found `{s}`"
            ))),
        },
    }
}

fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_limit()? {
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| CliError::input(format!("cannot start worker threads: {e}")))
}

/// Displacement at each `z`, in input order.
pub fn scan_displacement(
    sys: &PerturbedOscillator,
    params: &[f64],
    eps: f64,
    zs: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<DisplacementSample>> {
    let samples: Vec<_> = pool()?.install(|| {
        zs.par_iter()
            .map(|&z| displacement_numeric(sys, params, z, eps, cfg))
            .collect()
    });
    samples.into_iter().map(|s| s.map_err(CliError::from)).collect()
}

/// Grid scan in parallel, then bisection of every sign change.
pub fn find_cycles(
    sys: &PerturbedOscillator,
    params: &[f64],
    eps: f64,
    (z_min, z_max, grid): (f64, f64, usize),
    cfg: &IntegratorConfig,
    z_tol: f64,
) -> Result<CycleSearch> {
    if grid < 2 || !(z_min > 0.0 && z_max > z_min) {
        return Err(CliError::input(
            "cycle search needs 0 < zmin < zmax and at least two grid points",
        ));
    }
    let zs = linspace(z_min, z_max, grid);
    let scan: Vec<(f64, f64, f64)> = scan_displacement(sys, params, eps, &zs, cfg)?
        .iter()
        .map(|s| (s.z, s.value, s.error))
        .collect();
    Ok(cycles_from_scan(
        scan,
        |z| displacement_numeric(sys, params, z, eps, cfg),
        z_tol,
    )?)
}
