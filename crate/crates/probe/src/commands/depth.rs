//! Depth sweep: entry and cost-level variances versus layer count at fixed
//! system size.

use std::path::Path;

use anyhow::{Result, bail};
use plateau_core::derivatives::{CostEvaluator, EstimateMode};
use plateau_core::ensemble::{self, EnsembleSpec};
use plateau_core::stats;
use plateau_core::{Circuit, CostKind, GraphFamily};
use serde::Serialize;

use super::scale::EntryRow;
use crate::csvio::{CsvFile, fmt_f64};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Serialize)]
pub struct DepthConfig {
    pub costs: Vec<CostKind>,
    pub n: usize,
    pub l_min: usize,
    pub l_max: usize,
    pub seeds: usize,
    pub entry: (usize, usize),
    pub family: GraphFamily,
    pub base_seed: u64,
    pub threads: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthCostRow {
    pub n: usize,
    pub depth: usize,
    pub cost: CostKind,
    pub n_seeds: usize,
    pub var_hat: f64,
    pub ci: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct DepthOutcome {
    pub entries: Vec<EntryRow>,
    pub cost_rows: Vec<DepthCostRow>,
}

/// Depth-zero circuits are parameter-free: every seed sees the same exact
/// cost, so the cost variance is exactly zero and there are no entry rows.
fn depth_zero_row(cfg: &DepthConfig, cost: CostKind) -> Result<DepthCostRow> {
    let circuit = Circuit::hardware_efficient(cfg.n, 0, cfg.family)?;
    let obs = ensemble::observable_for_kind(cost, cfg.n)?;
    let mut eval = CostEvaluator::for_circuit(&circuit)?;
    let costs: Vec<f64> = (0..cfg.seeds)
        .map(|_| eval.cost(&circuit, &obs, &plateau_core::ParamPoint::zeros(0)))
        .collect::<plateau_core::Result<_>>()?;
    let var = stats::variance_unbiased(&costs)?;
    let mut rng = ensemble::seed_stream(cfg.base_seed, u64::MAX - 1);
    let ci =
        stats::bootstrap_variance_ci(&costs, stats::DEFAULT_BOOTSTRAP_RESAMPLES, 0.95, &mut rng)?;
    Ok(DepthCostRow {
        n: cfg.n,
        depth: 0,
        cost,
        n_seeds: cfg.seeds,
        var_hat: var,
        ci,
    })
}

pub fn run(cfg: &DepthConfig, pool: &rayon::ThreadPool) -> Result<DepthOutcome> {
    if cfg.l_min > cfg.l_max {
        bail!("invalid depth range {}..{}", cfg.l_min, cfg.l_max);
    }
    let (j, k) = cfg.entry;
    let mut entries = Vec::new();
    let mut cost_rows = Vec::new();
    for &cost in &cfg.costs {
        for depth in cfg.l_min..=cfg.l_max {
            if depth == 0 {
                cost_rows.push(depth_zero_row(cfg, cost)?);
                continue;
            }
            let m = cfg.n * depth;
            if j >= m || k >= m {
                bail!("entry ({j}, {k}) out of range at depth {depth} (M = {m})");
            }
            let diag_spec = EnsembleSpec {
                n_qubits: cfg.n,
                depth,
                family: cfg.family,
                cost,
                entry: (j, j),
                n_seeds: cfg.seeds,
                base_seed: cfg.base_seed,
                mode: EstimateMode::Exact,
            };
            let diag = super::run_ensemble_parallel(pool, &diag_spec)?;
            let (cost_var, cost_ci) = super::cost_level_variance(&diag)?;
            entries.push(EntryRow {
                n: cfg.n,
                depth,
                cost,
                entry: (j, j),
                n_seeds: cfg.seeds,
                var_hat: diag.var_hat,
                ci: diag.ci95,
            });
            cost_rows.push(DepthCostRow {
                n: cfg.n,
                depth,
                cost,
                n_seeds: cfg.seeds,
                var_hat: cost_var,
                ci: cost_ci,
            });
            let mut off_spec = diag_spec;
            off_spec.entry = (j, k);
            let off = super::run_ensemble_parallel(pool, &off_spec)?;
            entries.push(EntryRow {
                n: cfg.n,
                depth,
                cost,
                entry: (j, k),
                n_seeds: cfg.seeds,
                var_hat: off.var_hat,
                ci: off.ci95,
            });
        }
    }
    Ok(DepthOutcome { entries, cost_rows })
}

pub fn write(cfg: &DepthConfig, outcome: &DepthOutcome, out_dir: &Path) -> Result<()> {
    let mut manifest = RunManifest::new("depth", cfg.base_seed, cfg.clone());

    let mut variances = CsvFile::create(out_dir, "depth_variances.csv", super::VARIANCE_HEADER)?;
    for r in &outcome.entries {
        variances.row(&super::scale::entry_row_fields(r))?;
    }
    let (name, rows) = variances.finish()?;
    manifest.add_output(name, rows);

    let mut costs = CsvFile::create(
        out_dir,
        "depth_cost_variances.csv",
        "n,L,cost_kind,mode,shots,n_seeds,var_hat,ci_lo,ci_hi",
    )?;
    for r in &outcome.cost_rows {
        costs.row(&[
            r.n.to_string(),
            r.depth.to_string(),
            r.cost.label().to_string(),
            "exact".to_string(),
            "0".to_string(),
            r.n_seeds.to_string(),
            fmt_f64(r.var_hat),
            fmt_f64(r.ci.0),
            fmt_f64(r.ci.1),
        ])?;
    }
    let (name, rows) = costs.finish()?;
    manifest.add_output(name, rows);

    manifest.write(out_dir)?;
    Ok(())
}

pub fn execute(cfg: &DepthConfig, out_dir: &Path) -> Result<()> {
    let pool = crate::pool::build(cfg.threads)?;
    let outcome = run(cfg, &pool)?;
    write(cfg, &outcome, out_dir)?;
    println!(
        "depth: wrote {} entry rows and {} cost rows to {}",
        outcome.entries.len(),
        outcome.cost_rows.len(),
        out_dir.display()
    );
    Ok(())
}
