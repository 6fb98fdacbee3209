//! Command-line interface: subcommands, flags, and the named presets that
//! bundle the full-scale and desk-scale configurations.

use std::path::PathBuf;

use anyhow::{Context, Result, bail};
use clap::{Args, Parser, Subcommand};
use plateau_core::optimize::OptimizerKind;
use plateau_core::{CostKind, GraphFamily};

use crate::commands::bounds::BoundsConfig;
use crate::commands::depth::DepthConfig;
use crate::commands::optimize::OptimizeConfig;
use crate::commands::scale::ScaleConfig;
use crate::commands::shots::ShotsConfig;
use crate::commands::spectrum::SpectrumConfig;

pub const DEFAULT_BASE_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "plateau-probe",
    version,
    about = "Hessian-entry variance experiments on layered variational circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Variance vs. system size, with scaling-law fits
    Scale(ScaleArgs),
    /// Variance vs. circuit depth at fixed size
    Depth(DepthArgs),
    /// Finite-shot variance vs. shot count, two-term fits, N(epsilon)
    Shots(ShotsArgs),
    /// Hessian eigenvalue diagnostics
    Spectrum(SpectrumArgs),
    /// SGD / QNG trajectories under sampled gradients
    Optimize(OptimizeArgs),
    /// Lightcone growth bounds, dependency degrees, shot budgets
    Bounds(BoundsArgs),
}

fn parse_costs(list: &str) -> Result<Vec<CostKind>> {
    list.split(',')
        .map(|item| match item.trim() {
            "global" => Ok(CostKind::GlobalParity),
            "local" => Ok(CostKind::LocalZAverage),
            "tfim" => Ok(CostKind::TfimDensity {
                coupling: 1.0,
                field: 1.0,
            }),
            other => bail!("unknown cost kind `{other}` (expected global|local|tfim)"),
        })
        .collect()
}

fn parse_family(name: &str) -> Result<GraphFamily> {
    match name {
        "chain" => Ok(GraphFamily::Chain),
        "ring" => Ok(GraphFamily::Ring),
        "grid2d" => Ok(GraphFamily::Grid2d),
        "complete" => Ok(GraphFamily::Complete),
        other => bail!("unknown graph family `{other}`"),
    }
}

fn parse_entry(text: &str) -> Result<(usize, usize)> {
    let (j, k) = text
        .split_once(',')
        .context("entry must be `j,k` (0-based parameter indices)")?;
    Ok((j.trim().parse()?, k.trim().parse()?))
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(Into::into))
        .collect()
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(Into::into))
        .collect()
}

const DEFAULT_SHOT_GRID: &[u64] = &[16, 32, 64, 128, 256, 512, 1024, 2048, 4096];

#[derive(Debug, Clone, Args)]
pub struct ScaleArgs {
    /// Named configuration: fig2 | fig2-desk | fig3 | fig3-desk
    #[arg(long)]
    pub preset: Option<String>,
    /// Comma list of cost kinds (global|local|tfim)
    #[arg(long)]
    pub cost: Option<String>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Random initializations per configuration
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Off-diagonal Hessian entry `j,k` (diagonal uses `j,j`)
    #[arg(long)]
    pub entry: Option<String>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub base_seed: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long, env = "PLATEAU_PROBE_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct ScalePreset {
    costs: &'static str,
    n_min: usize,
    n_max: usize,
    seeds: usize,
}

impl ScaleArgs {
    pub fn resolve(&self) -> Result<(ScaleConfig, PathBuf)> {
        let preset = match self.preset.as_deref() {
            None | Some("fig2") => ScalePreset {
                costs: "global,local",
                n_min: 2,
                n_max: 16,
                seeds: 200,
            },
            Some("fig2-desk") => ScalePreset {
                costs: "global,local",
                n_min: 2,
                n_max: 12,
                seeds: 200,
            },
            Some("fig3") => ScalePreset {
                costs: "tfim,global",
                n_min: 4,
                n_max: 14,
                seeds: 150,
            },
            Some("fig3-desk") => ScalePreset {
                costs: "tfim,global",
                n_min: 4,
                n_max: 12,
                seeds: 150,
            },
            Some(other) => bail!("unknown scale preset `{other}`"),
        };
        let cfg = ScaleConfig {
            costs: parse_costs(self.cost.as_deref().unwrap_or(preset.costs))?,
            n_min: self.n_min.unwrap_or(preset.n_min),
            n_max: self.n_max.unwrap_or(preset.n_max),
            depth: self.depth.unwrap_or(4),
            seeds: self.seeds.unwrap_or(preset.seeds),
            entry: parse_entry(self.entry.as_deref().unwrap_or("0,1"))?,
            family: parse_family(self.family.as_deref().unwrap_or("chain"))?,
            base_seed: self.base_seed.unwrap_or(DEFAULT_BASE_SEED),
            threads: self.threads.unwrap_or(0),
        };
        let out = self
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("runs/scale"));
        Ok((cfg, out))
    }
}

#[derive(Debug, Clone, Args)]
pub struct DepthArgs {
    /// Named configuration: fig4 | fig4-desk
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub cost: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub l_min: Option<usize>,
    #[arg(long)]
    pub l_max: Option<usize>,
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub entry: Option<String>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub base_seed: Option<u64>,
    #[arg(long, env = "PLATEAU_PROBE_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl DepthArgs {
    pub fn resolve(&self) -> Result<(DepthConfig, PathBuf)> {
        let (n, l_min, l_max, seeds) = match self.preset.as_deref() {
            None | Some("fig4") => (16, 1, 12, 200),
            Some("fig4-desk") => (10, 1, 8, 100),
            Some(other) => bail!("unknown depth preset `{other}`"),
        };
        let cfg = DepthConfig {
            costs: parse_costs(self.cost.as_deref().unwrap_or("global,local"))?,
            n: self.n.unwrap_or(n),
            l_min: self.l_min.unwrap_or(l_min),
            l_max: self.l_max.unwrap_or(l_max),
            seeds: self.seeds.unwrap_or(seeds),
            entry: parse_entry(self.entry.as_deref().unwrap_or("0,1"))?,
            family: parse_family(self.family.as_deref().unwrap_or("chain"))?,
            base_seed: self.base_seed.unwrap_or(DEFAULT_BASE_SEED),
            threads: self.threads.unwrap_or(0),
        };
        let out = self
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("runs/depth"));
        Ok((cfg, out))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ShotsArgs {
    /// Named configuration: fig5 | fig5-desk
    #[arg(long)]
    pub preset: Option<String>,
    /// Single cost kind for the sweep
    #[arg(long)]
    pub cost: Option<String>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub entry: Option<String>,
    /// Comma list of shot counts
    #[arg(long)]
    pub grid: Option<String>,
    /// Absolute tolerance for N(epsilon)
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub base_seed: Option<u64>,
    #[arg(long, env = "PLATEAU_PROBE_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ShotsArgs {
    pub fn resolve(&self) -> Result<(ShotsConfig, PathBuf)> {
        let (cost, n_min, n_max, seeds, entry) = match self.preset.as_deref() {
            None | Some("fig5") => ("global", 4, 12, 200, "0,0"),
            Some("fig5-desk") => ("local", 8, 8, 1000, "0,0"),
            Some(other) => bail!("unknown shots preset `{other}`"),
        };
        let costs = parse_costs(self.cost.as_deref().unwrap_or(cost))?;
        if costs.len() != 1 {
            bail!("shots sweep takes exactly one cost kind");
        }
        let cfg = ShotsConfig {
            cost: costs[0],
            n_min: self.n_min.unwrap_or(n_min),
            n_max: self.n_max.unwrap_or(n_max),
            depth: self.depth.unwrap_or(4),
            seeds: self.seeds.unwrap_or(seeds),
            entry: parse_entry(self.entry.as_deref().unwrap_or(entry))?,
            grid: match self.grid.as_deref() {
                Some(g) => parse_u64_list(g)?,
                None => DEFAULT_SHOT_GRID.to_vec(),
            },
            epsilon: self.epsilon.unwrap_or(0.05),
            family: parse_family(self.family.as_deref().unwrap_or("chain"))?,
            base_seed: self.base_seed.unwrap_or(DEFAULT_BASE_SEED),
            threads: self.threads.unwrap_or(0),
        };
        let out = self
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("runs/shots"));
        Ok((cfg, out))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Named configuration: fig6 | fig6-desk
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub cost: Option<String>,
    /// Comma list of system sizes
    #[arg(long)]
    pub n_list: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Near-zero eigenvalue threshold
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub base_seed: Option<u64>,
    #[arg(long, env = "PLATEAU_PROBE_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SpectrumArgs {
    pub fn resolve(&self) -> Result<(SpectrumConfig, PathBuf)> {
        let n_list = match self.preset.as_deref() {
            None | Some("fig6") => "10,16",
            Some("fig6-desk") => "6,8,10",
            Some(other) => bail!("unknown spectrum preset `{other}`"),
        };
        let cfg = SpectrumConfig {
            costs: parse_costs(self.cost.as_deref().unwrap_or("global,local"))?,
            n_list: parse_usize_list(self.n_list.as_deref().unwrap_or(n_list))?,
            depth: self.depth.unwrap_or(4),
            seeds: self.seeds.unwrap_or(20),
            epsilon: self.epsilon.unwrap_or(1e-4),
            family: parse_family(self.family.as_deref().unwrap_or("chain"))?,
            base_seed: self.base_seed.unwrap_or(DEFAULT_BASE_SEED),
            threads: self.threads.unwrap_or(0),
        };
        let out = self
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("runs/spectrum"));
        Ok((cfg, out))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    /// Named configuration: fig7 | fig7-desk
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub cost: Option<String>,
    /// Comma list of optimizers (sgd|qng)
    #[arg(long)]
    pub optimizer: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Shots per shifted gradient evaluation (0 = exact gradients)
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub sgd_step: Option<f64>,
    #[arg(long)]
    pub qng_step: Option<f64>,
    /// QNG metric regularization
    #[arg(long)]
    pub qng_reg: Option<f64>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub base_seed: Option<u64>,
    #[arg(long, env = "PLATEAU_PROBE_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct OptimizePreset {
    n: usize,
    depth: usize,
    iterations: usize,
    sgd_step: f64,
    qng_step: f64,
}

impl OptimizeArgs {
    pub fn resolve(&self) -> Result<(OptimizeConfig, PathBuf)> {
        let preset = match self.preset.as_deref() {
            None | Some("fig7") => OptimizePreset {
                n: 18,
                depth: 8,
                iterations: 200,
                sgd_step: 0.05,
                qng_step: 0.02,
            },
            // smaller steps keep desk-scale trajectories near initialization
            Some("fig7-desk") => OptimizePreset {
                n: 10,
                depth: 4,
                iterations: 100,
                sgd_step: 0.005,
                qng_step: 0.005,
            },
            Some(other) => bail!("unknown optimize preset `{other}`"),
        };
        let optimizers = self
            .optimizer
            .as_deref()
            .unwrap_or("sgd,qng")
            .split(',')
            .map(|o| match o.trim() {
                "sgd" => Ok(OptimizerKind::Sgd),
                "qng" => Ok(OptimizerKind::Qng),
                other => bail!("unknown optimizer `{other}`"),
            })
            .collect::<Result<Vec<_>>>()?;
        let shots = self.shots.unwrap_or(100);
        let cfg = OptimizeConfig {
            costs: parse_costs(self.cost.as_deref().unwrap_or("global,local"))?,
            optimizers,
            n: self.n.unwrap_or(preset.n),
            depth: self.depth.unwrap_or(preset.depth),
            iterations: self.iterations.unwrap_or(preset.iterations),
            seeds: self.seeds.unwrap_or(10),
            shots: (shots > 0).then_some(shots),
            sgd_step: self.sgd_step.unwrap_or(preset.sgd_step),
            qng_step: self.qng_step.unwrap_or(preset.qng_step),
            metric_reg: self.qng_reg.unwrap_or(1e-3),
            family: parse_family(self.family.as_deref().unwrap_or("chain"))?,
            base_seed: self.base_seed.unwrap_or(DEFAULT_BASE_SEED),
            threads: self.threads.unwrap_or(0),
        };
        let out = self
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("runs/optimize"));
        Ok((cfg, out))
    }
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Term-wise local cost for the dependency analysis (local|tfim)
    #[arg(long)]
    pub cost: Option<String>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n_list: Option<String>,
    #[arg(long)]
    pub depth_list: Option<String>,
    /// Gate locality r of the architecture
    #[arg(long)]
    pub gate_locality: Option<usize>,
    /// Traced constant in the lightcone bound
    #[arg(long)]
    pub c_loc: Option<f64>,
    /// Resolution fraction eta in (0, 1]
    #[arg(long)]
    pub eta: Option<f64>,
    /// Absolute tolerance for N(epsilon)
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Per-evaluation variance proxy sigma^2
    #[arg(long)]
    pub sigma_sq: Option<f64>,
    #[arg(long)]
    pub entry: Option<String>,
    /// Variance CSV from a scale/depth run for empirical columns
    #[arg(long)]
    pub empirical: Option<PathBuf>,
    /// Two-term fit CSV from a shots run for absolute budgets
    #[arg(long)]
    pub shots_fits: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl BoundsArgs {
    pub fn resolve(&self) -> Result<(BoundsConfig, PathBuf)> {
        let costs = parse_costs(self.cost.as_deref().unwrap_or("local"))?;
        if costs.len() != 1 {
            bail!("bounds analysis takes exactly one cost kind");
        }
        let cfg = BoundsConfig {
            cost: costs[0],
            family: parse_family(self.family.as_deref().unwrap_or("chain"))?,
            n_list: parse_usize_list(self.n_list.as_deref().unwrap_or("16,32,64,128"))?,
            depth_list: parse_usize_list(self.depth_list.as_deref().unwrap_or("1,2,3,4"))?,
            gate_locality: self.gate_locality.unwrap_or(2),
            c_loc: self.c_loc.unwrap_or(1.0),
            eta: self.eta.unwrap_or(0.1),
            epsilon: self.epsilon.unwrap_or(0.05),
            sigma_sq: self.sigma_sq.unwrap_or(1.0),
            entry: parse_entry(self.entry.as_deref().unwrap_or("0,0"))?,
            empirical: self.empirical.clone(),
            shots_fits: self.shots_fits.clone(),
        };
        let out = self
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("runs/bounds"));
        Ok((cfg, out))
    }
}
