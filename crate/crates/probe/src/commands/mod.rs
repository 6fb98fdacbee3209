//! Sweep commands. Each command has a serializable config, a pure `run`
//! returning in-memory results, and a `write` that emits CSVs plus the
//! manifest; `execute` chains them.

pub mod bounds;
pub mod depth;
pub mod optimize;
pub mod scale;
pub mod shots;
pub mod spectrum;

use anyhow::Result;
use plateau_core::ensemble::{self, EnsembleSpec, EnsembleStats, SeedSample};
use plateau_core::stats;
use rayon::prelude::*;

/// Stream index for cost-level bootstrap intervals (the per-entry bootstrap
/// uses `u64::MAX` inside the core crate).
const COST_BOOTSTRAP_STREAM: u64 = u64::MAX - 1;

/// Shared CSV header for ensemble variance rows.
pub const VARIANCE_HEADER: &str =
    "n,L,cost_kind,entry_j,entry_k,mode,shots,n_seeds,var_hat,ci_lo,ci_hi";

/// Run one ensemble with its seeds fanned out over the pool; aggregation is
/// the deterministic seed-ordered fold from the core crate.
pub fn run_ensemble_parallel(
    pool: &rayon::ThreadPool,
    spec: &EnsembleSpec,
) -> Result<EnsembleStats> {
    spec.validate()?;
    let circuit = spec.circuit()?;
    let obs = spec.observable()?;
    let rule = spec.rule();
    let samples: Vec<SeedSample> = pool.install(|| {
        (0..spec.n_seeds as u64)
            .into_par_iter()
            .map(|i| ensemble::evaluate_seed(&circuit, &obs, &rule, spec.mode, spec.base_seed, i))
            .collect::<plateau_core::Result<_>>()
    })?;
    Ok(EnsembleStats::from_samples(spec.clone(), samples)?)
}

/// Unbiased variance of the unshifted cost column with its own bootstrap CI.
pub fn cost_level_variance(stats_: &EnsembleStats) -> Result<(f64, (f64, f64))> {
    let idx = stats_
        .spec
        .rule()
        .zero_shift_index()
        .ok_or_else(|| anyhow::anyhow!("rule has no unshifted entry"))?;
    let values = stats_.shifted_cost_column(idx);
    let var = stats::variance_unbiased(&values)?;
    let mut rng = ensemble::seed_stream(stats_.spec.base_seed, COST_BOOTSTRAP_STREAM);
    let ci =
        stats::bootstrap_variance_ci(&values, stats::DEFAULT_BOOTSTRAP_RESAMPLES, 0.95, &mut rng)?;
    Ok((var, ci))
}
