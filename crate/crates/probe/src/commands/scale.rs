//! System-size sweep: Hessian-entry and cost-level variances versus qubit
//! count, with scaling-law fits.

use std::path::Path;

use anyhow::{Result, bail};
use plateau_core::derivatives::EstimateMode;
use plateau_core::ensemble::EnsembleSpec;
use plateau_core::stats::{FitModel, FitResult, fit_scaling};
use plateau_core::{CostKind, GraphFamily};
use serde::Serialize;

use crate::csvio::{CsvFile, fmt_f64};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Serialize)]
pub struct ScaleConfig {
    pub costs: Vec<CostKind>,
    pub n_min: usize,
    pub n_max: usize,
    pub depth: usize,
    pub seeds: usize,
    pub entry: (usize, usize),
    pub family: GraphFamily,
    pub base_seed: u64,
    pub threads: usize,
}

impl ScaleConfig {
    fn validate(&self) -> Result<()> {
        if self.n_min > self.n_max || self.n_min == 0 {
            bail!("invalid size range {}..{}", self.n_min, self.n_max);
        }
        if self.depth == 0 {
            bail!("scale sweep needs depth >= 1");
        }
        let m_min = self.n_min * self.depth;
        if self.entry.0 >= m_min || self.entry.1 >= m_min {
            bail!(
                "entry ({}, {}) out of range for the smallest configuration (M = {m_min})",
                self.entry.0,
                self.entry.1
            );
        }
        Ok(())
    }

    fn fit_model(cost: CostKind) -> FitModel {
        match cost {
            CostKind::GlobalParity | CostKind::GlobalCustom => FitModel::ExpInN,
            _ => FitModel::PowerInN,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryRow {
    pub n: usize,
    pub depth: usize,
    pub cost: CostKind,
    pub entry: (usize, usize),
    pub n_seeds: usize,
    pub var_hat: f64,
    pub ci: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct CostRow {
    pub n: usize,
    pub depth: usize,
    pub cost: CostKind,
    pub n_seeds: usize,
    pub var_hat: f64,
    pub ci: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct FitRow {
    pub cost: CostKind,
    pub quantity: &'static str,
    pub fit: FitResult,
}

#[derive(Debug, Clone)]
pub struct ScaleOutcome {
    pub entries: Vec<EntryRow>,
    pub cost_rows: Vec<CostRow>,
    pub fits: Vec<FitRow>,
}

/// Sweep sizes for every requested cost: diagonal entry, off-diagonal entry,
/// and the cost-level variance (from the diagonal rule's unshifted column).
pub fn run(cfg: &ScaleConfig, pool: &rayon::ThreadPool) -> Result<ScaleOutcome> {
    cfg.validate()?;
    let (j, k) = cfg.entry;
    let mut entries = Vec::new();
    let mut cost_rows = Vec::new();
    let mut fits = Vec::new();
    for &cost in &cfg.costs {
        let mut diag_points = Vec::new();
        let mut off_points = Vec::new();
        let mut cost_points = Vec::new();
        for n in cfg.n_min..=cfg.n_max {
            let diag_spec = EnsembleSpec {
                n_qubits: n,
                depth: cfg.depth,
                family: cfg.family,
                cost,
                entry: (j, j),
                n_seeds: cfg.seeds,
                base_seed: cfg.base_seed,
                mode: EstimateMode::Exact,
            };
            let diag = super::run_ensemble_parallel(pool, &diag_spec)?;
            let (cost_var, cost_ci) = super::cost_level_variance(&diag)?;
            diag_points.push((n as f64, diag.var_hat));
            cost_points.push((n as f64, cost_var));
            entries.push(EntryRow {
                n,
                depth: cfg.depth,
                cost,
                entry: (j, j),
                n_seeds: cfg.seeds,
                var_hat: diag.var_hat,
                ci: diag.ci95,
            });
            cost_rows.push(CostRow {
                n,
                depth: cfg.depth,
                cost,
                n_seeds: cfg.seeds,
                var_hat: cost_var,
                ci: cost_ci,
            });

            let mut off_spec = diag_spec;
            off_spec.entry = (j, k);
            let off = super::run_ensemble_parallel(pool, &off_spec)?;
            off_points.push((n as f64, off.var_hat));
            entries.push(EntryRow {
                n,
                depth: cfg.depth,
                cost,
                entry: (j, k),
                n_seeds: cfg.seeds,
                var_hat: off.var_hat,
                ci: off.ci95,
            });
        }
        // scaling fits need at least three sizes; smaller sweeps are
        // data-generation runs and skip them
        if diag_points.len() >= 3 {
            let model = ScaleConfig::fit_model(cost);
            fits.push(FitRow {
                cost,
                quantity: "var_hjj",
                fit: fit_scaling(&diag_points, model)?,
            });
            fits.push(FitRow {
                cost,
                quantity: "var_hjk",
                fit: fit_scaling(&off_points, model)?,
            });
            fits.push(FitRow {
                cost,
                quantity: "var_cost",
                fit: fit_scaling(&cost_points, model)?,
            });
        }
    }
    Ok(ScaleOutcome {
        entries,
        cost_rows,
        fits,
    })
}

pub(crate) fn entry_row_fields(r: &EntryRow) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.depth.to_string(),
        r.cost.label().to_string(),
        r.entry.0.to_string(),
        r.entry.1.to_string(),
        "exact".to_string(),
        "0".to_string(),
        r.n_seeds.to_string(),
        fmt_f64(r.var_hat),
        fmt_f64(r.ci.0),
        fmt_f64(r.ci.1),
    ]
}

pub(crate) fn fit_fields(r: &FitRow) -> Vec<String> {
    let (p1, p2) = match r.fit.params {
        plateau_core::stats::FitParams::Exp { prefactor, rate } => (prefactor, rate),
        plateau_core::stats::FitParams::Power {
            prefactor,
            exponent,
        } => (prefactor, exponent),
        plateau_core::stats::FitParams::TwoTerm { floor, shot_coeff } => (floor, shot_coeff),
    };
    vec![
        r.cost.label().to_string(),
        r.quantity.to_string(),
        r.fit.model.label().to_string(),
        fmt_f64(p1),
        fmt_f64(p2),
        fmt_f64(r.fit.r_squared),
    ]
}

pub fn write(cfg: &ScaleConfig, outcome: &ScaleOutcome, out_dir: &Path) -> Result<()> {
    let mut manifest = RunManifest::new("scale", cfg.base_seed, cfg.clone());

    let mut variances = CsvFile::create(out_dir, "scale_variances.csv", super::VARIANCE_HEADER)?;
    for r in &outcome.entries {
        variances.row(&entry_row_fields(r))?;
    }
    let (name, rows) = variances.finish()?;
    manifest.add_output(name, rows);

    let mut costs = CsvFile::create(
        out_dir,
        "scale_cost_variances.csv",
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

    let mut fits = CsvFile::create(
        out_dir,
        "scale_fits.csv",
        "cost_kind,quantity,model,param_prefactor_or_floor,param_rate_or_exponent_or_coeff,r_squared",
    )?;
    for r in &outcome.fits {
        fits.row(&fit_fields(r))?;
    }
    let (name, rows) = fits.finish()?;
    manifest.add_output(name, rows);

    manifest.write(out_dir)?;
    Ok(())
}

pub fn execute(cfg: &ScaleConfig, out_dir: &Path) -> Result<()> {
    let pool = crate::pool::build(cfg.threads)?;
    let outcome = run(cfg, &pool)?;
    write(cfg, &outcome, out_dir)?;
    for fit in &outcome.fits {
        let fields = fit_fields(fit);
        println!(
            "scale fit: cost={} quantity={} model={} params=({}, {}) r2={}",
            fields[0], fields[1], fields[2], fields[3], fields[4], fields[5]
        );
    }
    println!(
        "scale: wrote {} entry rows to {}",
        outcome.entries.len(),
        out_dir.display()
    );
    Ok(())
}
