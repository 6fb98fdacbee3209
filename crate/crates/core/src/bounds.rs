//! Theory-side calculators: dependency-graph variance bounds, lightcone
//! covariance cutoffs, finite-shift transference, a Haar second-moment
//! oracle, and the shot budgets they imply.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ansatz::Circuit;
use crate::derivatives::{CostEvaluator, ShiftRule};
use crate::ensemble::{draw_initialization_from, seed_stream};
use crate::graph::{GraphFamily, InteractionGraph};
use crate::observables::Observable;
use crate::sim::Statevector;
use crate::stats::{self, FitResult};
use crate::{Error, Result};

/// Qubit cap for dense-trace Haar computations.
pub const HAAR_MAX_QUBITS: usize = 10;

/// Graph on local cost terms; edges join terms whose backward lightcones can
/// overlap (support distance at most `k + 2 r L`).
#[derive(Debug, Clone)]
pub struct DependencyGraph {
    threshold: usize,
    adjacency: Vec<Vec<usize>>,
    max_degree: usize,
}

impl DependencyGraph {
    pub fn n_terms(&self) -> usize {
        self.adjacency.len()
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
}

/// Build the dependency graph of a term-wise local observable under the
/// distance threshold `k + 2 r L` on the interaction graph.
pub fn build_dependency_graph(
    obs: &Observable,
    graph: &InteractionGraph,
    gate_locality: usize,
    depth: usize,
) -> Result<DependencyGraph> {
    if !obs.is_termwise_local() {
        return Err(Error::NotTermwiseLocal);
    }
    let threshold = obs.locality() + 2 * gate_locality * depth;
    let supports: Vec<Vec<usize>> = obs.terms().iter().map(|t| t.support_vec()).collect();
    let n = supports.len();
    let mut adjacency = alloc::vec![Vec::new(); n];
    for v in 0..n {
        for w in (v + 1)..n {
            let within = match graph.distance(&supports[v], &supports[w])? {
                Some(d) => d <= threshold,
                None => false,
            };
            if within {
                adjacency[v].push(w);
                adjacency[w].push(v);
            }
        }
    }
    let max_degree = adjacency.iter().map(|a| a.len()).max().unwrap_or(0);
    Ok(DependencyGraph {
        threshold,
        adjacency,
        max_degree,
    })
}

/// The lightcone growth bound `c_loc * V_G(k + 2 r L) / n`, with the
/// `(k + 2 r L)^D / n` lattice form attached where the family has one.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalVarianceBound {
    pub value: f64,
    pub radius: usize,
    pub growth_value: usize,
    pub poly_form: Option<f64>,
}

pub fn local_variance_bound(
    n: usize,
    k_locality: usize,
    gate_locality: usize,
    depth: usize,
    graph: &InteractionGraph,
    c_loc: f64,
) -> LocalVarianceBound {
    let radius = k_locality + 2 * gate_locality * depth;
    let growth_value = graph.growth_function(radius);
    let value = c_loc * growth_value as f64 / n as f64;
    let poly_form = graph
        .family()
        .lattice_dimension()
        .map(|d| c_loc * (radius as f64).powi(d as i32) / n as f64);
    LocalVarianceBound {
        value,
        radius,
        growth_value,
        poly_form,
    }
}

/// `(max_degree + 1) * per_term_var_bound / n` for an averaged sum of `n`
/// terms whose dependencies follow the graph.
pub fn dependency_variance_bound(dep: &DependencyGraph, per_term_var_bound: f64, n: usize) -> f64 {
    (dep.max_degree() + 1) as f64 * per_term_var_bound / n as f64
}

/// `(sum_s |w_s|)^2 * v_n`: variance bound for the rule's linear combination
/// given a uniform shifted-cost variance bound `v_n`.
pub fn transference_bound(v_n: f64, rule: &ShiftRule) -> f64 {
    let a = rule.abs_weight_sum();
    a * a * v_n
}

/// Result of a covariance cutoff probe between two single-term costs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffCheck {
    /// Support distance on the interaction graph (`None` if disconnected).
    pub distance: Option<usize>,
    /// The hard cutoff `2 r L`.
    pub cutoff: usize,
    /// Whether the exact influencing parameter sets are disjoint.
    pub params_disjoint: bool,
    pub cov_hat: f64,
    /// Standard error of the covariance estimate under independence.
    pub cov_se: f64,
}

/// Measure the empirical covariance of two single-term costs over shared
/// random initializations, alongside the combinatorial lightcone check.
///
/// Beyond distance `2 r L` the influencing parameter sets are provably
/// disjoint, so the exact covariance vanishes; inside the cutoff only the
/// uniform bound `|cov| <= 1` applies.
pub fn covariance_cutoff_check(
    circuit: &Circuit,
    term_a: &Observable,
    term_b: &Observable,
    n_seeds: usize,
    base_seed: u64,
) -> Result<CutoffCheck> {
    if term_a.terms().len() != 1 || term_b.terms().len() != 1 {
        return Err(Error::NotTermwiseLocal);
    }
    if n_seeds < 2 {
        return Err(Error::TooFewSeeds {
            have: n_seeds,
            need: 2,
        });
    }
    let supp_a = term_a.terms()[0].support_vec();
    let supp_b = term_b.terms()[0].support_vec();
    let distance = circuit.graph().distance(&supp_a, &supp_b)?;
    let cutoff = 2 * circuit.gate_locality() * circuit.depth();
    let cone_a = circuit.backward_lightcone(&supp_a)?;
    let cone_b = circuit.backward_lightcone(&supp_b)?;
    let params_disjoint = cone_a.params.intersection(&cone_b.params).next().is_none();

    let mut eval = CostEvaluator::for_circuit(circuit)?;
    let m = circuit.param_count();
    let mut xs = Vec::with_capacity(n_seeds);
    let mut ys = Vec::with_capacity(n_seeds);
    for i in 0..n_seeds as u64 {
        let theta = draw_initialization_from(&mut seed_stream(base_seed, i), m);
        xs.push(eval.cost(circuit, term_a, &theta)?);
        ys.push(eval.cost(circuit, term_b, &theta)?);
    }
    let cov_hat = stats::covariance_unbiased(&xs, &ys)?;
    let var_x = stats::variance_unbiased(&xs)?;
    let var_y = stats::variance_unbiased(&ys)?;
    let cov_se = (var_x * var_y / (n_seeds as f64 - 1.0)).sqrt();
    Ok(CutoffCheck {
        distance,
        cutoff,
        params_disjoint,
        cov_hat,
        cov_se,
    })
}

/// Closed-form and Monte-Carlo cost variance over Haar-random pure states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarVariance {
    pub formula: f64,
    pub monte_carlo: f64,
    /// Standard error of the Monte-Carlo variance estimate.
    pub std_err: f64,
}

/// `Var[<O>] = (Tr(O^2) - Tr(O)^2/d) / (d(d+1))` over Haar states, plus a
/// Monte-Carlo estimate from normalized complex-Gaussian vectors.
pub fn haar_variance_oracle<R: Rng + ?Sized>(
    obs: &Observable,
    n_samples: usize,
    rng: &mut R,
) -> Result<HaarVariance> {
    let n = obs.n_qubits();
    if n > HAAR_MAX_QUBITS {
        return Err(Error::HaarTooLarge {
            n_qubits: n,
            max: HAAR_MAX_QUBITS,
        });
    }
    if n_samples < 2 {
        return Err(Error::TooFewPoints {
            have: n_samples,
            need: 2,
        });
    }
    let d = (1usize << n) as f64;
    // Pauli strings are traceless unless identity, and orthogonal under the
    // trace inner product: Tr(P_t P_t') = d [t == t'].
    let mut tr_o = 0.0;
    let mut tr_o2 = 0.0;
    for t in obs.terms() {
        if t.string().is_identity() {
            tr_o += t.coeff() * d;
        }
        for t2 in obs.terms() {
            if t.string() == t2.string() {
                tr_o2 += t.coeff() * t2.coeff() * d;
            }
        }
    }
    let formula = (tr_o2 - tr_o * tr_o / d) / (d * (d + 1.0));

    let dim = 1usize << n;
    let mut values = Vec::with_capacity(n_samples);
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); dim];
    for _ in 0..n_samples {
        let mut norm_sqr = 0.0;
        for a in &mut amps {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *a = Complex64::new(re, im);
            norm_sqr += a.norm_sqr();
        }
        let scale = 1.0 / norm_sqr.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        let state = Statevector::from_amplitudes(n, amps.clone())?;
        values.push(state.expectation(obs)?);
    }
    let monte_carlo = stats::variance_unbiased(&values)?;
    // Var(s^2) = mu4/B - sigma^4 (B-3)/(B(B-1))
    let mv = stats::mean(&values);
    let b = n_samples as f64;
    let mu4 = values.iter().map(|v| (v - mv).powi(4)).sum::<f64>() / b;
    let var_of_var = (mu4 / b - monte_carlo * monte_carlo * (b - 3.0) / (b * (b - 1.0))).max(0.0);
    Ok(HaarVariance {
        formula,
        monte_carlo,
        std_err: var_of_var.sqrt(),
    })
}

/// Frobenius and spectral norm scale bounds from entry-wise moments:
/// `(M^2 (v + mu^2), M sqrt(v + mu^2))`.
pub fn norm_scale_bounds(entry_var_bound: f64, entry_mean_bound: f64, m: usize) -> (f64, f64) {
    let second_moment = entry_var_bound + entry_mean_bound * entry_mean_bound;
    let mf = m as f64;
    (mf * mf * second_moment, mf * second_moment.sqrt())
}

/// A shot requirement, or the distinguished outcome when no finite budget
/// meets the criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ShotBudget {
    Shots(u64),
    Unattainable,
}

impl ShotBudget {
    pub fn shots(&self) -> Option<u64> {
        match self {
            ShotBudget::Shots(n) => Some(*n),
            ShotBudget::Unattainable => None,
        }
    }
}

/// Smallest `N` with `c_S sigma^2 / N <= eta * var_rho`: shots needed to
/// push estimator shot noise below a fraction `eta` of the initialization
/// variance. Nonpositive `var_rho` is the distinguished unresolvable case.
pub fn resolution_shots(
    var_rho: f64,
    rule: &ShiftRule,
    sigma_sq: f64,
    eta: f64,
) -> Result<ShotBudget> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidTolerance { name: "eta" });
    }
    if sigma_sq < 0.0 {
        return Err(Error::InvalidTolerance { name: "sigma_sq" });
    }
    if var_rho <= 0.0 {
        return Ok(ShotBudget::Unattainable);
    }
    let needed = rule.shot_variance_constant() * sigma_sq / (eta * var_rho);
    Ok(ShotBudget::Shots((needed.ceil() as u64).max(1)))
}

/// Smallest `N` with `floor + shot_coeff / N <= epsilon^2` for a fitted
/// two-term model; when the floor already exceeds `epsilon^2`, no budget
/// reaches the tolerance.
pub fn absolute_shots(epsilon: f64, fit: &FitResult) -> Result<ShotBudget> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidTolerance { name: "epsilon" });
    }
    let (floor, shot_coeff) = fit.two_term()?;
    let eps_sq = epsilon * epsilon;
    let headroom = eps_sq - floor;
    if headroom < 0.0 || (headroom == 0.0 && shot_coeff > 0.0) {
        return Ok(ShotBudget::Unattainable);
    }
    if shot_coeff <= 0.0 {
        return Ok(ShotBudget::Shots(1));
    }
    Ok(ShotBudget::Shots(
        ((shot_coeff / headroom).ceil() as u64).max(1),
    ))
}

/// Regime of a bound report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Regime {
    Global,
    Local,
}

/// Theory-side quantities for one configuration, paired with their empirical
/// counterparts when available.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub regime: Regime,
    pub n_qubits: usize,
    pub k_locality: usize,
    pub gate_locality: usize,
    pub depth: usize,
    pub family: GraphFamily,
    pub eta: f64,
    pub c_loc: f64,
    /// `k + 2 r L`.
    pub lightcone_radius: usize,
    pub growth_value: usize,
    pub dep_max_degree: Option<usize>,
    /// Local regime: `c_loc V_G(k+2rL)/n`. Global regime: the transference
    /// bound from an empirical cost variance, when one is attached.
    pub variance_bound: Option<f64>,
    pub empirical_variance: Option<f64>,
    pub resolution_shots: Option<ShotBudget>,
    pub absolute_shots: Option<ShotBudget>,
}
