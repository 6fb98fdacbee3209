//! Random-initialization ensembles: per-seed Hessian-entry evaluations,
//! variance estimates with bootstrap intervals, and the identities tying the
//! entry variance to the covariance of its shifted costs.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{Circuit, ParamPoint};
use crate::derivatives::{CostEvaluator, EstimateMode, ShiftRule};
use crate::graph::GraphFamily;
use crate::linalg::{Matrix, quadratic_form};
use crate::observables::{CostKind, Observable};
use crate::stats::{self, KsTest};
use crate::{Error, Result};

/// RNG stream for one seed index: same key, per-index stream counter, so
/// ensembles are reproducible and order-independent under parallel execution.
pub fn seed_stream(base_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(index);
    rng
}

/// Stream index reserved for bootstrap resampling.
const BOOTSTRAP_STREAM: u64 = u64::MAX;

/// `m` i.i.d. uniform angles on `[0, 2pi)` from the given stream.
pub fn draw_initialization_from<R: Rng + ?Sized>(rng: &mut R, m: usize) -> ParamPoint {
    let tau = core::f64::consts::TAU;
    ParamPoint::new((0..m).map(|_| rng.random::<f64>() * tau).collect())
}

/// Deterministic uniform initialization for a bare seed.
pub fn draw_initialization(m: usize, seed: u64) -> ParamPoint {
    draw_initialization_from(&mut ChaCha8Rng::seed_from_u64(seed), m)
}

/// Configuration of one ensemble: circuit, cost, target entry, seeds, mode.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleSpec {
    pub n_qubits: usize,
    pub depth: usize,
    pub family: GraphFamily,
    pub cost: CostKind,
    /// Hessian entry `(j, k)`; `j == k` selects the diagonal rule.
    pub entry: (usize, usize),
    pub n_seeds: usize,
    pub base_seed: u64,
    pub mode: EstimateMode,
}

/// Observable instance for a named cost kind.
pub fn observable_for_kind(kind: CostKind, n: usize) -> Result<Observable> {
    match kind {
        CostKind::GlobalParity => Observable::global_parity(n),
        CostKind::LocalZAverage => Observable::local_z_average(n),
        CostKind::TfimDensity { coupling, field } => Observable::tfim_density(n, coupling, field),
        CostKind::GlobalCustom | CostKind::LocalCustom => Err(Error::EmptyObservable),
    }
}

impl EnsembleSpec {
    pub fn circuit(&self) -> Result<Circuit> {
        Circuit::hardware_efficient(self.n_qubits, self.depth, self.family)
    }

    pub fn observable(&self) -> Result<Observable> {
        observable_for_kind(self.cost, self.n_qubits)
    }

    pub fn rule(&self) -> ShiftRule {
        ShiftRule::hessian(self.entry.0, self.entry.1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_seeds < 2 {
            return Err(Error::TooFewSeeds {
                have: self.n_seeds,
                need: 2,
            });
        }
        let m = self.n_qubits * self.depth;
        for index in [self.entry.0, self.entry.1] {
            if index >= m {
                return Err(Error::ParamIndex {
                    index,
                    param_count: m,
                });
            }
        }
        Ok(())
    }
}

/// One seed's record: the shifted costs in rule order and the combined value.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSample {
    pub seed_index: u64,
    pub shifted_costs: Vec<f64>,
    pub value: f64,
}

/// Evaluate one seed of an ensemble. Self-contained, so seeds can run as
/// independent parallel tasks; results depend only on `(base_seed, index)`.
pub fn evaluate_seed(
    circuit: &Circuit,
    obs: &Observable,
    rule: &ShiftRule,
    mode: EstimateMode,
    base_seed: u64,
    seed_index: u64,
) -> Result<SeedSample> {
    let mut rng = seed_stream(base_seed, seed_index);
    let theta = draw_initialization_from(&mut rng, circuit.param_count());
    let mut eval = CostEvaluator::for_circuit(circuit)?;
    let shifted_costs = match mode {
        EstimateMode::Exact => eval.rule_costs_exact(circuit, obs, &theta, rule)?,
        EstimateMode::Shots(n) => eval.rule_costs_shots(circuit, obs, &theta, rule, n, &mut rng)?,
    };
    Ok(SeedSample {
        seed_index,
        value: rule.combine(&shifted_costs),
        shifted_costs,
    })
}

/// Aggregated ensemble: per-seed records, unbiased variance, bootstrap CI,
/// and the covariance matrix of the shifted costs.
#[derive(Debug, Clone)]
pub struct EnsembleStats {
    pub spec: EnsembleSpec,
    pub samples: Vec<SeedSample>,
    /// Unbiased sample variance of the entry values.
    pub var_hat: f64,
    /// 95% percentile bootstrap interval for `var_hat`.
    pub ci95: (f64, f64),
    /// Unbiased covariance of the shifted-cost vectors (one row per seed).
    pub sigma: Matrix,
}

impl EnsembleStats {
    /// Deterministic fold of per-seed samples, in seed-index order.
    pub fn from_samples(spec: EnsembleSpec, mut samples: Vec<SeedSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooFewSeeds {
                have: samples.len(),
                need: 2,
            });
        }
        samples.sort_by_key(|s| s.seed_index);
        let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
        let var_hat = stats::variance_unbiased(&values)?;
        let rows: Vec<Vec<f64>> = samples.iter().map(|s| s.shifted_costs.clone()).collect();
        let sigma = stats::covariance_matrix(&rows)?;
        let mut boot_rng = seed_stream(spec.base_seed, BOOTSTRAP_STREAM);
        let ci95 = stats::bootstrap_variance_ci(
            &values,
            stats::DEFAULT_BOOTSTRAP_RESAMPLES,
            0.95,
            &mut boot_rng,
        )?;
        Ok(Self {
            spec,
            samples,
            var_hat,
            ci95,
            sigma,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.value).collect()
    }

    /// Per-seed costs of one shift-rule entry (e.g. the unshifted column of
    /// the diagonal rule for cost-level statistics).
    pub fn shifted_cost_column(&self, idx: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.shifted_costs[idx]).collect()
    }
}

/// Run a whole ensemble sequentially.
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<EnsembleStats> {
    spec.validate()?;
    let circuit = spec.circuit()?;
    let obs = spec.observable()?;
    let rule = spec.rule();
    let samples: Vec<SeedSample> = (0..spec.n_seeds as u64)
        .map(|i| evaluate_seed(&circuit, &obs, &rule, spec.mode, spec.base_seed, i))
        .collect::<Result<_>>()?;
    EnsembleStats::from_samples(spec.clone(), samples)
}

/// `|sampleVar(H) - w^T Sigma w|`: the pointwise covariance--quadratic
/// identity, which holds to rounding because both sides are the same linear
/// statistic of the retained shifted costs.
pub fn covariance_quadratic_check(stats: &EnsembleStats, rule: &ShiftRule) -> Result<f64> {
    if stats.sigma.dim() != rule.len()
        || stats
            .samples
            .iter()
            .any(|s| s.shifted_costs.len() != rule.len())
    {
        return Err(Error::MissingShiftedCosts);
    }
    let quad = quadratic_form(&stats.sigma, &rule.weights());
    Ok((stats.var_hat - quad).abs())
}

/// Outcome of a distributional shift-invariance test.
#[derive(Debug, Clone)]
pub struct ShiftInvarianceCheck {
    pub ks: KsTest,
    /// Costs at unshifted draws (streams `0..n_seeds`).
    pub baseline: Vec<f64>,
    /// Costs at shifted draws from independent streams (`n_seeds..2n_seeds`).
    pub shifted: Vec<f64>,
}

/// Two-sample test that `C(theta)` and `C(theta (+) s)` share a distribution
/// under the uniform initialization measure. Uses independent seed streams
/// for the two samples, never same-seed pairing.
pub fn shift_invariance_check(
    circuit: &Circuit,
    obs: &Observable,
    shift: &[(usize, f64)],
    n_seeds: usize,
    base_seed: u64,
) -> Result<ShiftInvarianceCheck> {
    if n_seeds < 2 {
        return Err(Error::TooFewSeeds {
            have: n_seeds,
            need: 2,
        });
    }
    let mut eval = CostEvaluator::for_circuit(circuit)?;
    let m = circuit.param_count();
    let mut baseline = Vec::with_capacity(n_seeds);
    let mut shifted = Vec::with_capacity(n_seeds);
    for i in 0..n_seeds as u64 {
        let theta = draw_initialization_from(&mut seed_stream(base_seed, i), m);
        baseline.push(eval.cost(circuit, obs, &theta)?);
        let theta2 = draw_initialization_from(&mut seed_stream(base_seed, n_seeds as u64 + i), m);
        shifted.push(eval.cost(circuit, obs, &theta2.shifted(shift)?)?);
    }
    let ks = stats::ks_two_sample(&baseline, &shifted)?;
    Ok(ShiftInvarianceCheck {
        ks,
        baseline,
        shifted,
    })
}
