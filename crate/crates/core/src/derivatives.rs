//! Exact and finite-shot parameter-shift derivatives of circuit costs.
//!
//! Every derivative here is a fixed linear combination of cost evaluations at
//! shifted parameter points, so estimators keep their shifted evaluations for
//! covariance analysis.

use alloc::vec::Vec;

use rand::Rng;

use crate::ansatz::{Circuit, ParamPoint};
use crate::linalg::Matrix;
use crate::observables::{MeasurementBasis, Observable};
use crate::sim::Statevector;
use crate::{Error, Result};

/// Default limit on the parameter count for full Hessian assembly.
pub const DEFAULT_HESSIAN_CAP: usize = 256;

/// One shifted evaluation: a sparse parameter shift and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftEntry {
    /// Sparse parameter-index -> radians shift; empty means the unshifted point.
    pub shifts: Vec<(usize, f64)>,
    pub weight: f64,
}

/// A derivative expressed as `sum_s weight_s * C(theta (+) shift_s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftRule {
    entries: Vec<ShiftEntry>,
}

impl ShiftRule {
    /// Two-shift gradient rule: `dC/dtheta_j = (C(+pi/2) - C(-pi/2)) / 2`.
    pub fn gradient(j: usize) -> Self {
        let half_pi = core::f64::consts::FRAC_PI_2;
        Self {
            entries: alloc::vec![
                ShiftEntry {
                    shifts: alloc::vec![(j, half_pi)],
                    weight: 0.5
                },
                ShiftEntry {
                    shifts: alloc::vec![(j, -half_pi)],
                    weight: -0.5
                },
            ],
        }
    }

    /// Three-shift diagonal rule: `H_jj = (C(+pi) - 2 C(0) + C(-pi)) / 4`.
    pub fn hessian_diag(j: usize) -> Self {
        let pi = core::f64::consts::PI;
        Self {
            entries: alloc::vec![
                ShiftEntry {
                    shifts: alloc::vec![(j, pi)],
                    weight: 0.25
                },
                ShiftEntry {
                    shifts: Vec::new(),
                    weight: -0.5
                },
                ShiftEntry {
                    shifts: alloc::vec![(j, -pi)],
                    weight: 0.25
                },
            ],
        }
    }

    /// Four-shift off-diagonal rule with `+-pi/2` on each index.
    ///
    /// Canonicalized on `(min(j,k), max(j,k))` so that `(j, k)` and `(k, j)`
    /// produce bit-identical evaluations.
    pub fn hessian_offdiag(j: usize, k: usize) -> Result<Self> {
        if j == k {
            return Err(Error::SameIndex { index: j });
        }
        let (lo, hi) = if j < k { (j, k) } else { (k, j) };
        let half_pi = core::f64::consts::FRAC_PI_2;
        let mut entries = Vec::with_capacity(4);
        for (s_lo, s_hi, weight) in [
            (half_pi, half_pi, 0.25),
            (half_pi, -half_pi, -0.25),
            (-half_pi, half_pi, -0.25),
            (-half_pi, -half_pi, 0.25),
        ] {
            entries.push(ShiftEntry {
                shifts: alloc::vec![(lo, s_lo), (hi, s_hi)],
                weight,
            });
        }
        Ok(Self { entries })
    }

    /// Diagonal or off-diagonal Hessian rule depending on the index pair.
    pub fn hessian(j: usize, k: usize) -> Self {
        if j == k {
            Self::hessian_diag(j)
        } else {
            Self::hessian_offdiag(j, k).expect("distinct indices")
        }
    }

    pub fn entries(&self) -> &[ShiftEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.weight).collect()
    }

    /// `c_S = sum_s weight_s^2` (1/2 gradient, 3/8 diagonal, 1/4 off-diagonal).
    pub fn shot_variance_constant(&self) -> f64 {
        self.entries.iter().map(|e| e.weight * e.weight).sum()
    }

    /// `sum_s |weight_s|` (1 for all three rules here).
    pub fn abs_weight_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.weight.abs()).sum()
    }

    /// Position of the unshifted entry, when the rule has one.
    pub fn zero_shift_index(&self) -> Option<usize> {
        self.entries.iter().position(|e| e.shifts.is_empty())
    }

    /// `sum_s weight_s * costs[s]`.
    pub fn combine(&self, costs: &[f64]) -> f64 {
        assert_eq!(costs.len(), self.entries.len());
        self.entries
            .iter()
            .zip(costs)
            .map(|(e, c)| e.weight * c)
            .sum()
    }
}

/// Evaluation mode of an estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EstimateMode {
    Exact,
    Shots(u64),
}

impl EstimateMode {
    pub fn label(&self) -> &'static str {
        match self {
            EstimateMode::Exact => "exact",
            EstimateMode::Shots(_) => "shots",
        }
    }

    pub fn shots(&self) -> Option<u64> {
        match self {
            EstimateMode::Exact => None,
            EstimateMode::Shots(n) => Some(*n),
        }
    }
}

/// A Hessian-entry value together with the shifted costs that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianEstimate {
    pub j: usize,
    pub k: usize,
    pub value: f64,
    pub mode: EstimateMode,
    /// One cost per shift-rule entry, in rule order.
    pub shifted_costs: Vec<f64>,
}

/// Reusable evaluation context owning the statevector scratch buffer.
///
/// One evaluator per task; evaluations are deterministic given inputs and
/// the caller's RNG state.
pub struct CostEvaluator {
    state: Statevector,
}

impl CostEvaluator {
    pub fn new(n_qubits: usize) -> Result<Self> {
        Ok(Self {
            state: Statevector::zero(n_qubits)?,
        })
    }

    pub fn for_circuit(circuit: &Circuit) -> Result<Self> {
        Self::new(circuit.n_qubits())
    }

    /// Exact cost `<psi(theta)|O|psi(theta)>`.
    pub fn cost(&mut self, circuit: &Circuit, obs: &Observable, theta: &ParamPoint) -> Result<f64> {
        circuit.prepare_into(theta, &mut self.state)?;
        self.state.expectation(obs)
    }

    /// Finite-shot cost estimate: `shots` projective samples per commuting
    /// measurement group, each group averaged and summed.
    pub fn sampled_cost<R: Rng + ?Sized>(
        &mut self,
        circuit: &Circuit,
        obs: &Observable,
        theta: &ParamPoint,
        shots: u64,
        rng: &mut R,
    ) -> Result<f64> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        if obs.n_qubits() != circuit.n_qubits() {
            return Err(Error::QubitCountMismatch {
                state: circuit.n_qubits(),
                observable: obs.n_qubits(),
            });
        }
        let groups = obs.measurement_groups()?;
        circuit.prepare_into(theta, &mut self.state)?;
        let mut total = 0.0;
        for group in groups {
            // union-of-support masks give the measured eigenvalue per outcome
            let term_masks: Vec<(f64, u64)> = group
                .terms
                .iter()
                .map(|&t| {
                    let term = &obs.terms()[t];
                    let mask = term.string().support().fold(0u64, |m, q| m | (1u64 << q));
                    (term.coeff(), mask)
                })
                .collect();
            let sampler = match group.basis {
                MeasurementBasis::Computational => self.state.outcome_sampler(),
                MeasurementBasis::XBasis => {
                    let mut rotated = self.state.clone();
                    rotated.apply_hadamard_all();
                    rotated.outcome_sampler()
                }
            };
            let mut acc = 0.0;
            for _ in 0..shots {
                let outcome = sampler.draw(rng);
                for &(coeff, mask) in &term_masks {
                    let sign = if (outcome & mask).count_ones() & 1 == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    acc += coeff * sign;
                }
            }
            total += acc / shots as f64;
        }
        Ok(total)
    }

    /// Exact costs at every shifted point of a rule, in rule order.
    pub fn rule_costs_exact(
        &mut self,
        circuit: &Circuit,
        obs: &Observable,
        theta: &ParamPoint,
        rule: &ShiftRule,
    ) -> Result<Vec<f64>> {
        rule.entries()
            .iter()
            .map(|e| self.cost(circuit, obs, &theta.shifted(&e.shifts)?))
            .collect()
    }

    /// Finite-shot costs at every shifted point; fresh independent shots per
    /// evaluation, no reuse across shifts.
    pub fn rule_costs_shots<R: Rng + ?Sized>(
        &mut self,
        circuit: &Circuit,
        obs: &Observable,
        theta: &ParamPoint,
        rule: &ShiftRule,
        shots: u64,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        rule.entries()
            .iter()
            .map(|e| self.sampled_cost(circuit, obs, &theta.shifted(&e.shifts)?, shots, rng))
            .collect()
    }

    /// Exact parameter-shift gradient entry.
    pub fn grad_entry(
        &mut self,
        circuit: &Circuit,
        obs: &Observable,
        theta: &ParamPoint,
        j: usize,
    ) -> Result<f64> {
        let rule = ShiftRule::gradient(j);
        let costs = self.rule_costs_exact(circuit, obs, theta, &rule)?;
        Ok(rule.combine(&costs))
    }

    /// Exact gradient over all parameters.
    pub fn gradient(
        &mut self,
        circuit: &Circuit,
        obs: &Observable,
        theta: &ParamPoint,
    ) -> Result<Vec<f64>> {
        (0..circuit.param_count())
            .map(|j| self.grad_entry(circuit, obs, theta, j))
            .collect()
    }

    /// Finite-shot gradient over all parameters (fresh shots per evaluation).
    pub fn gradient_shots<R: Rng + ?Sized>(
        &mut self,
        circuit: &Circuit,
        obs: &Observable,
        theta: &ParamPoint,
        shots: u64,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        (0..circuit.param_count())
            .map(|j| {
                let rule = ShiftRule::gradient(j);
                let costs = self.rule_costs_shots(circuit, obs, theta, &rule, shots, rng)?;
                Ok(rule.combine(&costs))
            })
            .collect()
    }

    pub fn hessian_entry(
        &mut self,
        circuit: &Circuit,
        obs: &Observable,
        theta: &ParamPoint,
        j: usize,
        k: usize,
    ) -> Result<HessianEstimate> {
        let rule = ShiftRule::hessian(j, k);
        let shifted_costs = self.rule_costs_exact(circuit, obs, theta, &rule)?;
        Ok(HessianEstimate {
            j,
            k,
            value: rule.combine(&shifted_costs),
            mode: EstimateMode::Exact,
            shifted_costs,
        })
    }

    #[allow(clippy::too_many_arguments)] // mirrors the estimator's natural signature
    pub fn hessian_entry_shots<R: Rng + ?Sized>(
        &mut self,
        circuit: &Circuit,
        obs: &Observable,
        theta: &ParamPoint,
        j: usize,
        k: usize,
        shots: u64,
        rng: &mut R,
    ) -> Result<HessianEstimate> {
        let rule = ShiftRule::hessian(j, k);
        let shifted_costs = self.rule_costs_shots(circuit, obs, theta, &rule, shots, rng)?;
        Ok(HessianEstimate {
            j,
            k,
            value: rule.combine(&shifted_costs),
            mode: EstimateMode::Shots(shots),
            shifted_costs,
        })
    }

    /// Full symmetric Hessian; the unshifted cost is shared across diagonal
    /// entries (exactness-preserving), everything else is evaluated per entry.
    pub fn full_hessian(
        &mut self,
        circuit: &Circuit,
        obs: &Observable,
        theta: &ParamPoint,
        cap: usize,
    ) -> Result<Matrix> {
        let m = circuit.param_count();
        if m > cap {
            return Err(Error::HessianCap { params: m, cap });
        }
        let mut h = Matrix::zeros(m);
        let pi = core::f64::consts::PI;
        let center = self.cost(circuit, obs, theta)?;
        for j in 0..m {
            let plus = self.cost(circuit, obs, &theta.shifted(&[(j, pi)])?)?;
            let minus = self.cost(circuit, obs, &theta.shifted(&[(j, -pi)])?)?;
            h.set(j, j, 0.25 * plus - 0.5 * center + 0.25 * minus);
        }
        for j in 0..m {
            for k in (j + 1)..m {
                let est = self.hessian_entry(circuit, obs, theta, j, k)?;
                h.set(j, k, est.value);
                h.set(k, j, est.value);
            }
        }
        Ok(h)
    }
}

/// Exact cost; convenience wrapper allocating a fresh evaluator.
pub fn cost(circuit: &Circuit, obs: &Observable, theta: &ParamPoint) -> Result<f64> {
    CostEvaluator::for_circuit(circuit)?.cost(circuit, obs, theta)
}

/// Finite-shot cost estimate (unbiased for [`cost`]).
pub fn sample_cost<R: Rng + ?Sized>(
    circuit: &Circuit,
    obs: &Observable,
    theta: &ParamPoint,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    CostEvaluator::for_circuit(circuit)?.sampled_cost(circuit, obs, theta, shots, rng)
}

/// Exact parameter-shift gradient entry.
pub fn grad_entry_exact(
    circuit: &Circuit,
    obs: &Observable,
    theta: &ParamPoint,
    j: usize,
) -> Result<f64> {
    CostEvaluator::for_circuit(circuit)?.grad_entry(circuit, obs, theta, j)
}

/// Exact parameter-shift Hessian entry with retained shifted costs.
pub fn hessian_entry_exact(
    circuit: &Circuit,
    obs: &Observable,
    theta: &ParamPoint,
    j: usize,
    k: usize,
) -> Result<HessianEstimate> {
    CostEvaluator::for_circuit(circuit)?.hessian_entry(circuit, obs, theta, j, k)
}

/// Finite-shot parameter-shift Hessian entry.
pub fn hessian_entry_shots<R: Rng + ?Sized>(
    circuit: &Circuit,
    obs: &Observable,
    theta: &ParamPoint,
    j: usize,
    k: usize,
    shots: u64,
    rng: &mut R,
) -> Result<HessianEstimate> {
    CostEvaluator::for_circuit(circuit)?.hessian_entry_shots(circuit, obs, theta, j, k, shots, rng)
}

/// Full symmetric Hessian, capped at `cap` parameters.
pub fn full_hessian_exact(
    circuit: &Circuit,
    obs: &Observable,
    theta: &ParamPoint,
    cap: usize,
) -> Result<Matrix> {
    CostEvaluator::for_circuit(circuit)?.full_hessian(circuit, obs, theta, cap)
}
