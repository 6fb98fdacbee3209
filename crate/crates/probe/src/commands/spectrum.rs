//! Spectral diagnostics: pooled Hessian eigenvalues across seeds with RMS
//! and near-zero-fraction summaries.

use std::path::Path;

use anyhow::{Result, bail};
use plateau_core::derivatives::{CostEvaluator, DEFAULT_HESSIAN_CAP};
use plateau_core::ensemble::{self, observable_for_kind};
use plateau_core::linalg::symmetric_eigenvalues;
use plateau_core::spectral::SpectralSummary;
use plateau_core::{Circuit, CostKind, GraphFamily};
use rayon::prelude::*;
use serde::Serialize;

use crate::csvio::{CsvFile, fmt_f64};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumConfig {
    pub costs: Vec<CostKind>,
    pub n_list: Vec<usize>,
    pub depth: usize,
    pub seeds: usize,
    pub epsilon: f64,
    pub family: GraphFamily,
    pub base_seed: u64,
    pub threads: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumBlock {
    pub n: usize,
    pub cost: CostKind,
    pub m_params: usize,
    /// Eigenvalues per seed, seed order.
    pub per_seed: Vec<Vec<f64>>,
    /// Pooled summary over all seeds.
    pub summary: SpectralSummary,
}

#[derive(Debug, Clone)]
pub struct SpectrumOutcome {
    pub blocks: Vec<SpectrumBlock>,
}

pub fn run(cfg: &SpectrumConfig, pool: &rayon::ThreadPool) -> Result<SpectrumOutcome> {
    if cfg.n_list.is_empty() || cfg.depth == 0 {
        bail!("spectrum sweep needs sizes and depth >= 1");
    }
    let mut blocks = Vec::new();
    for &cost in &cfg.costs {
        for &n in &cfg.n_list {
            let circuit = Circuit::hardware_efficient(n, cfg.depth, cfg.family)?;
            let m = circuit.param_count();
            if m > DEFAULT_HESSIAN_CAP {
                bail!(
                    "configuration n={n}, L={} exceeds the Hessian cap",
                    cfg.depth
                );
            }
            let obs = observable_for_kind(cost, n)?;
            let per_seed: Vec<Vec<f64>> = pool.install(|| {
                (0..cfg.seeds as u64)
                    .into_par_iter()
                    .map(|i| {
                        let theta = ensemble::draw_initialization_from(
                            &mut ensemble::seed_stream(cfg.base_seed, i),
                            m,
                        );
                        let h = CostEvaluator::for_circuit(&circuit)?.full_hessian(
                            &circuit,
                            &obs,
                            &theta,
                            DEFAULT_HESSIAN_CAP,
                        )?;
                        symmetric_eigenvalues(&h)
                    })
                    .collect::<plateau_core::Result<_>>()
            })?;
            let pooled: Vec<f64> = per_seed.iter().flatten().copied().collect();
            let summary = SpectralSummary::from_eigenvalues(pooled, cfg.epsilon);
            blocks.push(SpectrumBlock {
                n,
                cost,
                m_params: m,
                per_seed,
                summary,
            });
        }
    }
    Ok(SpectrumOutcome { blocks })
}

pub fn write(cfg: &SpectrumConfig, outcome: &SpectrumOutcome, out_dir: &Path) -> Result<()> {
    let mut manifest = RunManifest::new("spectrum", cfg.base_seed, cfg.clone());

    let mut eigen = CsvFile::create(
        out_dir,
        "spectrum_eigenvalues.csv",
        "n,L,cost_kind,seed_index,lambda",
    )?;
    for block in &outcome.blocks {
        for (seed, eigs) in block.per_seed.iter().enumerate() {
            for &lambda in eigs {
                eigen.row(&[
                    block.n.to_string(),
                    cfg.depth.to_string(),
                    block.cost.label().to_string(),
                    seed.to_string(),
                    fmt_f64(lambda),
                ])?;
            }
        }
    }
    let (name, rows) = eigen.finish()?;
    manifest.add_output(name, rows);

    let mut summary = CsvFile::create(
        out_dir,
        "spectrum_summary.csv",
        "n,L,cost_kind,n_seeds,m_params,epsilon,lambda_rms,deg_eps",
    )?;
    for block in &outcome.blocks {
        summary.row(&[
            block.n.to_string(),
            cfg.depth.to_string(),
            block.cost.label().to_string(),
            cfg.seeds.to_string(),
            block.m_params.to_string(),
            fmt_f64(cfg.epsilon),
            fmt_f64(block.summary.lambda_rms),
            fmt_f64(block.summary.deg_eps),
        ])?;
    }
    let (name, rows) = summary.finish()?;
    manifest.add_output(name, rows);

    manifest.write(out_dir)?;
    Ok(())
}

pub fn execute(cfg: &SpectrumConfig, out_dir: &Path) -> Result<()> {
    let pool = crate::pool::build(cfg.threads)?;
    let outcome = run(cfg, &pool)?;
    write(cfg, &outcome, out_dir)?;
    for block in &outcome.blocks {
        println!(
            "spectrum: n={} cost={} lambda_rms={} deg_eps={}",
            block.n,
            block.cost.label(),
            fmt_f64(block.summary.lambda_rms),
            fmt_f64(block.summary.deg_eps)
        );
    }
    Ok(())
}
