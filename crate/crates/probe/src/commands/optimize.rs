//! Finite-shot optimization trajectories for both optimizers and costs.

use std::path::Path;

use anyhow::{Result, bail};
use plateau_core::optimize::{OptimizerKind, Trajectory, TrajectoryConfig, run_trajectory_seed};
use plateau_core::{Circuit, CostKind, GraphFamily};
use rayon::prelude::*;
use serde::Serialize;

use crate::csvio::{CsvFile, fmt_f64};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Serialize)]
pub struct OptimizeConfig {
    pub costs: Vec<CostKind>,
    pub optimizers: Vec<OptimizerKind>,
    pub n: usize,
    pub depth: usize,
    pub iterations: usize,
    pub seeds: usize,
    pub shots: Option<u64>,
    pub sgd_step: f64,
    pub qng_step: f64,
    pub metric_reg: f64,
    pub family: GraphFamily,
    pub base_seed: u64,
    pub threads: usize,
}

impl OptimizeConfig {
    pub fn trajectory_config(&self, optimizer: OptimizerKind, cost: CostKind) -> TrajectoryConfig {
        TrajectoryConfig {
            n_qubits: self.n,
            depth: self.depth,
            family: self.family,
            cost,
            optimizer,
            step_size: match optimizer {
                OptimizerKind::Sgd => self.sgd_step,
                OptimizerKind::Qng => self.qng_step,
            },
            shots: self.shots,
            iterations: self.iterations,
            n_seeds: self.seeds,
            base_seed: self.base_seed,
            metric_reg: self.metric_reg,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub trajectories: Vec<Trajectory>,
}

pub fn run(cfg: &OptimizeConfig, pool: &rayon::ThreadPool) -> Result<OptimizeOutcome> {
    if cfg.seeds < 2 {
        bail!("trajectories need at least 2 seeds");
    }
    let circuit = Circuit::hardware_efficient(cfg.n, cfg.depth, cfg.family)?;
    let mut trajectories = Vec::new();
    for &optimizer in &cfg.optimizers {
        for &cost in &cfg.costs {
            let tc = cfg.trajectory_config(optimizer, cost);
            let seed_costs: Vec<Vec<f64>> = pool.install(|| {
                (0..cfg.seeds as u64)
                    .into_par_iter()
                    .map(|i| run_trajectory_seed(&circuit, &tc, i))
                    .collect::<plateau_core::Result<_>>()
            })?;
            trajectories.push(Trajectory::from_seed_costs(tc, seed_costs)?);
        }
    }
    Ok(OptimizeOutcome { trajectories })
}

pub fn write(cfg: &OptimizeConfig, outcome: &OptimizeOutcome, out_dir: &Path) -> Result<()> {
    let mut manifest = RunManifest::new("optimize", cfg.base_seed, cfg.clone());
    let mut rows = CsvFile::create(
        out_dir,
        "optimize_trajectories.csv",
        "optimizer,cost_kind,n,L,shots,step_size,iteration,mean_cost,std_cost",
    )?;
    for traj in &outcome.trajectories {
        for point in &traj.points {
            rows.row(&[
                traj.config.optimizer.label().to_string(),
                traj.config.cost.label().to_string(),
                traj.config.n_qubits.to_string(),
                traj.config.depth.to_string(),
                traj.config.shots.unwrap_or(0).to_string(),
                fmt_f64(traj.config.step_size),
                point.iteration.to_string(),
                fmt_f64(point.mean_cost),
                fmt_f64(point.std_cost),
            ])?;
        }
    }
    let (name, n_rows) = rows.finish()?;
    manifest.add_output(name, n_rows);
    manifest.write(out_dir)?;
    Ok(())
}

pub fn execute(cfg: &OptimizeConfig, out_dir: &Path) -> Result<()> {
    let pool = crate::pool::build(cfg.threads)?;
    let outcome = run(cfg, &pool)?;
    write(cfg, &outcome, out_dir)?;
    for traj in &outcome.trajectories {
        let first = traj.points.first().expect("has initial point");
        let last = traj.points.last().expect("has final point");
        println!(
            "optimize: {} {} mean cost {} -> {} (final std {})",
            traj.config.optimizer.label(),
            traj.config.cost.label(),
            fmt_f64(first.mean_cost),
            fmt_f64(last.mean_cost),
            fmt_f64(last.std_cost)
        );
    }
    Ok(())
}
