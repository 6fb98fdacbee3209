//! Finite-shot optimization trajectories: SGD and quantum natural gradient.
//!
//! Gradients are parameter-shift estimates (sampled or exact); the reported
//! per-iteration cost is always the exact expectation, so trajectories show
//! how sampling noise enters through the updates alone.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::ansatz::{Circuit, ParamPoint};
use crate::derivatives::CostEvaluator;
use crate::ensemble::{draw_initialization_from, observable_for_kind, seed_stream};
use crate::graph::GraphFamily;
use crate::linalg::{Matrix, solve_spd};
use crate::observables::CostKind;
use crate::stats;
use crate::{Error, Result};

/// First-order update family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OptimizerKind {
    Sgd,
    Qng,
}

impl OptimizerKind {
    pub fn label(&self) -> &'static str {
        match self {
            OptimizerKind::Sgd => "sgd",
            OptimizerKind::Qng => "qng",
        }
    }
}

/// Regularized Fubini-Study metric of the variational state family:
/// `F_ij = Re<d_i psi|d_j psi> - Re(<d_i psi|psi><psi|d_j psi>)`, plus
/// `lambda_reg` on the diagonal. Computed exactly from derivative states.
pub fn qng_metric(circuit: &Circuit, theta: &ParamPoint, lambda_reg: f64) -> Result<Matrix> {
    if lambda_reg <= 0.0 {
        return Err(Error::InvalidTolerance { name: "lambda_reg" });
    }
    let m = circuit.param_count();
    let psi = circuit.state(theta)?;
    let derivs: Vec<_> = (0..m)
        .map(|j| circuit.derivative_state(theta, j))
        .collect::<Result<_>>()?;
    // <d_j psi | psi>
    let overlaps: Vec<Complex64> = derivs.iter().map(|d| d.inner(&psi)).collect();
    let mut f = Matrix::zeros(m);
    for i in 0..m {
        for j in i..m {
            let gram = derivs[i].inner(&derivs[j]);
            let val = gram.re - (overlaps[i] * overlaps[j].conj()).re;
            f.set(i, j, val);
            f.set(j, i, val);
        }
    }
    f.add_scaled_identity(lambda_reg);
    Ok(f)
}

/// Configuration of a trajectory experiment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryConfig {
    pub n_qubits: usize,
    pub depth: usize,
    pub family: GraphFamily,
    pub cost: CostKind,
    pub optimizer: OptimizerKind,
    pub step_size: f64,
    /// Shots per shifted gradient evaluation; `None` runs exact gradients.
    pub shots: Option<u64>,
    pub iterations: usize,
    pub n_seeds: usize,
    pub base_seed: u64,
    /// Metric regularization for QNG.
    pub metric_reg: f64,
}

/// Mean and spread of the exact cost across seeds at one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryPoint {
    pub iteration: usize,
    pub mean_cost: f64,
    pub std_cost: f64,
}

/// Aggregated trajectory with per-seed exact cost curves retained.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub config: TrajectoryConfig,
    /// `iterations + 1` points, including the initial one.
    pub points: Vec<TrajectoryPoint>,
    /// Per-seed exact costs, `n_seeds x (iterations + 1)`.
    pub seed_costs: Vec<Vec<f64>>,
    /// Shifted gradient evaluations per iteration (`2 M`); the QNG metric is
    /// exact and consumes none.
    pub grad_evals_per_iteration: usize,
}

impl Trajectory {
    /// Deterministic aggregation of per-seed curves (seed order).
    pub fn from_seed_costs(config: TrajectoryConfig, seed_costs: Vec<Vec<f64>>) -> Result<Self> {
        if seed_costs.len() < 2 {
            return Err(Error::TooFewSeeds {
                have: seed_costs.len(),
                need: 2,
            });
        }
        let len = config.iterations + 1;
        let mut points = Vec::with_capacity(len);
        for it in 0..len {
            let at_iter: Vec<f64> = seed_costs.iter().map(|c| c[it]).collect();
            points.push(TrajectoryPoint {
                iteration: it,
                mean_cost: stats::mean(&at_iter),
                std_cost: stats::std_dev_unbiased(&at_iter)?,
            });
        }
        let grad_evals_per_iteration = 2 * config.n_qubits * config.depth;
        Ok(Self {
            config,
            points,
            seed_costs,
            grad_evals_per_iteration,
        })
    }
}

/// One seed's optimization run; returns the exact cost at iterations
/// `0..=iterations`. Self-contained per `(base_seed, seed_index)`.
pub fn run_trajectory_seed(
    circuit: &Circuit,
    cfg: &TrajectoryConfig,
    seed_index: u64,
) -> Result<Vec<f64>> {
    let obs = observable_for_kind(cfg.cost, cfg.n_qubits)?;
    let mut rng = seed_stream(cfg.base_seed, seed_index);
    let mut theta = draw_initialization_from(&mut rng, circuit.param_count());
    let mut eval = CostEvaluator::for_circuit(circuit)?;
    let mut costs = Vec::with_capacity(cfg.iterations + 1);
    costs.push(eval.cost(circuit, &obs, &theta)?);
    for _ in 0..cfg.iterations {
        let grad = match cfg.shots {
            None => eval.gradient(circuit, &obs, &theta)?,
            Some(n) => eval.gradient_shots(circuit, &obs, &theta, n, &mut rng)?,
        };
        let update = match cfg.optimizer {
            OptimizerKind::Sgd => grad,
            OptimizerKind::Qng => {
                let metric = qng_metric(circuit, &theta, cfg.metric_reg)?;
                solve_spd(&metric, &grad)?
            }
        };
        let mut next = theta.as_slice().to_vec();
        for (t, u) in next.iter_mut().zip(&update) {
            *t -= cfg.step_size * u;
        }
        theta = ParamPoint::new(next);
        costs.push(eval.cost(circuit, &obs, &theta)?);
    }
    Ok(costs)
}

/// Run all seeds sequentially and aggregate.
pub fn run_trajectory(cfg: &TrajectoryConfig) -> Result<Trajectory> {
    let circuit = Circuit::hardware_efficient(cfg.n_qubits, cfg.depth, cfg.family)?;
    let seed_costs: Vec<Vec<f64>> = (0..cfg.n_seeds as u64)
        .map(|i| run_trajectory_seed(&circuit, cfg, i))
        .collect::<Result<_>>()?;
    Trajectory::from_seed_costs(cfg.clone(), seed_costs)
}
