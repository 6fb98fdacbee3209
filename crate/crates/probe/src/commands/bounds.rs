//! Theory-side bound reports over a configuration grid, optionally joined
//! with empirical variances and two-term fits from earlier runs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result, bail};
use plateau_core::bounds::{
    BoundReport, Regime, ShotBudget, absolute_shots, build_dependency_graph, local_variance_bound,
    resolution_shots,
};
use plateau_core::derivatives::ShiftRule;
use plateau_core::ensemble::observable_for_kind;
use plateau_core::stats::{FitModel, FitParams, FitResult};
use plateau_core::{CostKind, GraphFamily, InteractionGraph};
use serde::Serialize;

use crate::manifest::RunManifest;

#[derive(Debug, Clone, Serialize)]
pub struct BoundsConfig {
    /// Term-wise local cost whose dependency structure is analyzed.
    pub cost: CostKind,
    pub family: GraphFamily,
    pub n_list: Vec<usize>,
    pub depth_list: Vec<usize>,
    pub gate_locality: usize,
    pub c_loc: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub sigma_sq: f64,
    /// Hessian entry whose shift rule sets the budget constants.
    pub entry: (usize, usize),
    /// Optional variance CSV (scale/depth format) for empirical columns.
    pub empirical: Option<PathBuf>,
    /// Optional two-term fit CSV (shots format) for absolute budgets.
    pub shots_fits: Option<PathBuf>,
}

/// Minimal reader for our own CSV outputs: header-indexed string fields.
fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading referenced CSV {}", path.display()))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .context("referenced CSV is empty")?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    Ok((header, rows))
}

fn column(header: &[String], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .with_context(|| format!("referenced CSV lacks a `{name}` column"))
}

/// Rows keyed by `(n, L, cost label)`.
type ConfigMap<T> = BTreeMap<(usize, usize, String), T>;

/// `(n, L, cost label) -> var_hat` for diagonal-entry rows.
fn load_empirical(path: &Path) -> Result<ConfigMap<f64>> {
    let (header, rows) = read_csv(path)?;
    let (n_col, l_col) = (column(&header, "n")?, column(&header, "L")?);
    let cost_col = column(&header, "cost_kind")?;
    let j_col = column(&header, "entry_j")?;
    let k_col = column(&header, "entry_k")?;
    let var_col = column(&header, "var_hat")?;
    let mut map = BTreeMap::new();
    for row in rows {
        if row[j_col] != row[k_col] {
            continue;
        }
        map.insert(
            (
                row[n_col].parse()?,
                row[l_col].parse()?,
                row[cost_col].clone(),
            ),
            row[var_col].parse::<f64>()?,
        );
    }
    Ok(map)
}

/// `(n, L, cost label) -> (a, b)` from a shots-fit CSV.
fn load_fits(path: &Path) -> Result<ConfigMap<(f64, f64)>> {
    let (header, rows) = read_csv(path)?;
    let (n_col, l_col) = (column(&header, "n")?, column(&header, "L")?);
    let cost_col = column(&header, "cost_kind")?;
    let a_col = column(&header, "a_floor")?;
    let b_col = column(&header, "b_shot_coeff")?;
    let mut map = BTreeMap::new();
    for row in rows {
        map.insert(
            (
                row[n_col].parse()?,
                row[l_col].parse()?,
                row[cost_col].clone(),
            ),
            (row[a_col].parse::<f64>()?, row[b_col].parse::<f64>()?),
        );
    }
    Ok(map)
}

pub fn run(cfg: &BoundsConfig) -> Result<Vec<BoundReport>> {
    if !cfg.cost.is_termwise_local() {
        bail!("bounds analysis needs a term-wise local cost (local or tfim)");
    }
    let empirical = cfg.empirical.as_deref().map(load_empirical).transpose()?;
    let fits = cfg.shots_fits.as_deref().map(load_fits).transpose()?;
    let rule = ShiftRule::hessian(cfg.entry.0, cfg.entry.1);

    let mut reports = Vec::new();
    for &n in &cfg.n_list {
        let graph = InteractionGraph::for_family(cfg.family, n)?;
        let obs = observable_for_kind(cfg.cost, n)?;
        let k_locality = obs.locality();
        for &depth in &cfg.depth_list {
            let dep = build_dependency_graph(&obs, &graph, cfg.gate_locality, depth)?;
            let bound =
                local_variance_bound(n, k_locality, cfg.gate_locality, depth, &graph, cfg.c_loc);
            let empirical_variance = empirical
                .as_ref()
                .and_then(|m| m.get(&(n, depth, cfg.cost.label().to_string())).copied());
            let res_budget = empirical_variance
                .map(|v| resolution_shots(v, &rule, cfg.sigma_sq, cfg.eta))
                .transpose()?;
            let abs_budget = fits
                .as_ref()
                .and_then(|m| m.get(&(n, depth, cfg.cost.label().to_string())))
                .map(|&(floor, shot_coeff)| {
                    let fit = FitResult {
                        model: FitModel::TwoTermInShots,
                        params: FitParams::TwoTerm { floor, shot_coeff },
                        r_squared: f64::NAN,
                    };
                    absolute_shots(cfg.epsilon, &fit)
                })
                .transpose()?;
            reports.push(BoundReport {
                regime: Regime::Local,
                n_qubits: n,
                k_locality,
                gate_locality: cfg.gate_locality,
                depth,
                family: cfg.family,
                eta: cfg.eta,
                c_loc: cfg.c_loc,
                lightcone_radius: bound.radius,
                growth_value: bound.growth_value,
                dep_max_degree: Some(dep.max_degree()),
                variance_bound: Some(bound.value),
                empirical_variance,
                resolution_shots: res_budget,
                absolute_shots: abs_budget,
            });

            // global-regime companion rows when empirical data is attached
            if let Some(map) = empirical.as_ref()
                && let Some(&v) = map.get(&(n, depth, "global".to_string()))
            {
                reports.push(BoundReport {
                    regime: Regime::Global,
                    n_qubits: n,
                    k_locality: n,
                    gate_locality: cfg.gate_locality,
                    depth,
                    family: cfg.family,
                    eta: cfg.eta,
                    c_loc: cfg.c_loc,
                    lightcone_radius: bound.radius,
                    growth_value: bound.growth_value,
                    dep_max_degree: None,
                    variance_bound: None,
                    empirical_variance: Some(v),
                    resolution_shots: Some(resolution_shots(v, &rule, cfg.sigma_sq, cfg.eta)?),
                    absolute_shots: None,
                });
            }
        }
    }
    Ok(reports)
}

pub fn write(cfg: &BoundsConfig, reports: &[BoundReport], out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join("bounds_report.json");
    std::fs::write(&path, serde_json::to_string_pretty(reports)?)
        .with_context(|| format!("writing {}", path.display()))?;
    let mut manifest = RunManifest::new("bounds", 0, cfg.clone());
    manifest.add_output("bounds_report.json".to_string(), reports.len());
    manifest.write(out_dir)?;
    Ok(())
}

pub fn execute(cfg: &BoundsConfig, out_dir: &Path) -> Result<()> {
    let reports = run(cfg)?;
    write(cfg, &reports, out_dir)?;
    for r in &reports {
        let budget = match r.resolution_shots {
            Some(ShotBudget::Shots(n)) => n.to_string(),
            Some(ShotBudget::Unattainable) => "unattainable".to_string(),
            None => "-".to_string(),
        };
        println!(
            "bounds: {:?} n={} L={} V_G({})={} bound={:?} empirical={:?} N_res={}",
            r.regime,
            r.n_qubits,
            r.depth,
            r.lightcone_radius,
            r.growth_value,
            r.variance_bound,
            r.empirical_variance,
            budget
        );
    }
    Ok(())
}
