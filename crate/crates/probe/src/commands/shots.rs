//! Shot-noise sweep: total variance of the finite-shot Hessian estimator
//! over a geometric shot grid, two-term model fits, and absolute-tolerance
//! shot requirements per system size.

use std::path::Path;

use anyhow::{Result, bail};
use plateau_core::bounds::{ShotBudget, absolute_shots};
use plateau_core::derivatives::EstimateMode;
use plateau_core::ensemble::EnsembleSpec;
use plateau_core::stats::{FitModel, FitResult, fit_scaling};
use plateau_core::{CostKind, GraphFamily};
use serde::Serialize;

use crate::csvio::{CsvFile, fmt_f64};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Serialize)]
pub struct ShotsConfig {
    pub cost: CostKind,
    pub n_min: usize,
    pub n_max: usize,
    pub depth: usize,
    pub seeds: usize,
    pub entry: (usize, usize),
    pub grid: Vec<u64>,
    pub epsilon: f64,
    pub family: GraphFamily,
    pub base_seed: u64,
    pub threads: usize,
}

#[derive(Debug, Clone)]
pub struct ShotsVarianceRow {
    pub n: usize,
    pub mode: EstimateMode,
    pub var_hat: f64,
    pub ci: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct ShotsFitRow {
    pub n: usize,
    pub fit: FitResult,
    /// Exact-mode baseline variance and its bootstrap CI.
    pub exact_var: f64,
    pub exact_ci: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct ShotsBudgetRow {
    pub n: usize,
    pub budget: ShotBudget,
}

#[derive(Debug, Clone)]
pub struct ShotsOutcome {
    pub variances: Vec<ShotsVarianceRow>,
    pub fits: Vec<ShotsFitRow>,
    pub budgets: Vec<ShotsBudgetRow>,
}

pub fn run(cfg: &ShotsConfig, pool: &rayon::ThreadPool) -> Result<ShotsOutcome> {
    if cfg.n_min > cfg.n_max || cfg.n_min == 0 {
        bail!("invalid size range {}..{}", cfg.n_min, cfg.n_max);
    }
    if cfg.grid.len() < 3 {
        bail!("shot grid needs at least 3 points for the two-term fit");
    }
    let mut variances = Vec::new();
    let mut fits = Vec::new();
    let mut budgets = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        let base = EnsembleSpec {
            n_qubits: n,
            depth: cfg.depth,
            family: cfg.family,
            cost: cfg.cost,
            entry: cfg.entry,
            n_seeds: cfg.seeds,
            base_seed: cfg.base_seed,
            mode: EstimateMode::Exact,
        };
        let exact = super::run_ensemble_parallel(pool, &base)?;
        variances.push(ShotsVarianceRow {
            n,
            mode: EstimateMode::Exact,
            var_hat: exact.var_hat,
            ci: exact.ci95,
        });
        let mut points = Vec::with_capacity(cfg.grid.len());
        for &shots in &cfg.grid {
            let mut spec = base.clone();
            spec.mode = EstimateMode::Shots(shots);
            let st = super::run_ensemble_parallel(pool, &spec)?;
            variances.push(ShotsVarianceRow {
                n,
                mode: spec.mode,
                var_hat: st.var_hat,
                ci: st.ci95,
            });
            points.push((shots as f64, st.var_hat));
        }
        let fit = fit_scaling(&points, FitModel::TwoTermInShots)?;
        budgets.push(ShotsBudgetRow {
            n,
            budget: absolute_shots(cfg.epsilon, &fit)?,
        });
        fits.push(ShotsFitRow {
            n,
            fit,
            exact_var: exact.var_hat,
            exact_ci: exact.ci95,
        });
    }
    Ok(ShotsOutcome {
        variances,
        fits,
        budgets,
    })
}

pub fn write(cfg: &ShotsConfig, outcome: &ShotsOutcome, out_dir: &Path) -> Result<()> {
    let mut manifest = RunManifest::new("shots", cfg.base_seed, cfg.clone());

    let mut variances = CsvFile::create(out_dir, "shots_variances.csv", super::VARIANCE_HEADER)?;
    for r in &outcome.variances {
        variances.row(&[
            r.n.to_string(),
            cfg.depth.to_string(),
            cfg.cost.label().to_string(),
            cfg.entry.0.to_string(),
            cfg.entry.1.to_string(),
            r.mode.label().to_string(),
            r.mode.shots().unwrap_or(0).to_string(),
            cfg.seeds.to_string(),
            fmt_f64(r.var_hat),
            fmt_f64(r.ci.0),
            fmt_f64(r.ci.1),
        ])?;
    }
    let (name, rows) = variances.finish()?;
    manifest.add_output(name, rows);

    let mut fits = CsvFile::create(
        out_dir,
        "shots_fits.csv",
        "n,L,cost_kind,entry_j,entry_k,a_floor,b_shot_coeff,r_squared,exact_var,exact_ci_lo,exact_ci_hi",
    )?;
    for r in &outcome.fits {
        let (a, b) = r.fit.two_term().map_err(anyhow::Error::from)?;
        fits.row(&[
            r.n.to_string(),
            cfg.depth.to_string(),
            cfg.cost.label().to_string(),
            cfg.entry.0.to_string(),
            cfg.entry.1.to_string(),
            fmt_f64(a),
            fmt_f64(b),
            fmt_f64(r.fit.r_squared),
            fmt_f64(r.exact_var),
            fmt_f64(r.exact_ci.0),
            fmt_f64(r.exact_ci.1),
        ])?;
    }
    let (name, rows) = fits.finish()?;
    manifest.add_output(name, rows);

    let mut budgets = CsvFile::create(out_dir, "shots_budget.csv", "n,L,cost_kind,epsilon,n_eps")?;
    for r in &outcome.budgets {
        let n_eps = match r.budget {
            ShotBudget::Shots(n) => n.to_string(),
            ShotBudget::Unattainable => "unreachable".to_string(),
        };
        budgets.row(&[
            r.n.to_string(),
            cfg.depth.to_string(),
            cfg.cost.label().to_string(),
            fmt_f64(cfg.epsilon),
            n_eps,
        ])?;
    }
    let (name, rows) = budgets.finish()?;
    manifest.add_output(name, rows);

    manifest.write(out_dir)?;
    Ok(())
}

pub fn execute(cfg: &ShotsConfig, out_dir: &Path) -> Result<()> {
    let pool = crate::pool::build(cfg.threads)?;
    let outcome = run(cfg, &pool)?;
    write(cfg, &outcome, out_dir)?;
    for r in &outcome.fits {
        let (a, b) = r.fit.two_term().map_err(anyhow::Error::from)?;
        println!(
            "shots fit: n={} a={} b={} r2={}",
            r.n,
            fmt_f64(a),
            fmt_f64(b),
            fmt_f64(r.fit.r_squared)
        );
    }
    println!(
        "shots: wrote {} variance rows to {}",
        outcome.variances.len(),
        out_dir.display()
    );
    Ok(())
}
