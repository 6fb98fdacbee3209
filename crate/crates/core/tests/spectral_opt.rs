//! Spectral diagnostics against finite-difference spectra, and trajectory
//! bookkeeping.

mod common;

use approx::assert_abs_diff_eq;
use common::{fd_hessian_entry, random_theta};
use plateau_core::derivatives::CostEvaluator;
use plateau_core::linalg::{Matrix, symmetric_eigenvalues};
use plateau_core::optimize::{OptimizerKind, TrajectoryConfig, run_trajectory};
use plateau_core::spectral::hessian_spectrum;
use plateau_core::{Circuit, CostKind, GraphFamily, Observable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn spectrum_matches_finite_difference_hessian() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let circuit = Circuit::hardware_efficient(3, 2, GraphFamily::Chain).unwrap();
    let obs = Observable::global_parity(3).unwrap();
    let theta = random_theta(circuit.param_count(), &mut rng);
    let summary = hessian_spectrum(&circuit, &obs, &theta, 1e-4, 64).unwrap();

    let m = circuit.param_count();
    let mut eval = CostEvaluator::for_circuit(&circuit).unwrap();
    let mut fd = Matrix::zeros(m);
    for j in 0..m {
        for k in j..m {
            let v = fd_hessian_entry(
                |t| eval.cost(&circuit, &obs, t).unwrap(),
                &theta,
                j,
                k,
                1e-3,
            );
            fd.set(j, k, v);
            fd.set(k, j, v);
        }
    }
    let fd_eigs = symmetric_eigenvalues(&fd).unwrap();
    assert_eq!(summary.eigenvalues.len(), fd_eigs.len());
    for (a, b) in summary.eigenvalues.iter().zip(&fd_eigs) {
        assert!((a - b).abs() < 1e-4, "{a} vs {b}");
    }
}

#[test]
fn spectral_sums_match_matrix_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    let circuit = Circuit::hardware_efficient(4, 2, GraphFamily::Chain).unwrap();
    let obs = Observable::local_z_average(4).unwrap();
    let theta = random_theta(circuit.param_count(), &mut rng);
    let mut eval = CostEvaluator::for_circuit(&circuit).unwrap();
    let h = eval.full_hessian(&circuit, &obs, &theta, 64).unwrap();
    let eigs = symmetric_eigenvalues(&h).unwrap();
    let sum: f64 = eigs.iter().sum();
    let sum_sq: f64 = eigs.iter().map(|l| l * l).sum();
    assert_abs_diff_eq!(sum, h.trace(), epsilon = 1e-8);
    assert_abs_diff_eq!(sum_sq, h.frobenius_norm_sqr(), epsilon = 1e-8);
}

#[test]
fn sgd_and_qng_consume_matching_gradient_evaluations() {
    let mk = |optimizer| TrajectoryConfig {
        n_qubits: 2,
        depth: 2,
        family: GraphFamily::Chain,
        cost: CostKind::LocalZAverage,
        optimizer,
        step_size: 0.05,
        shots: Some(16),
        iterations: 4,
        n_seeds: 2,
        base_seed: 3,
        metric_reg: 1e-3,
    };
    let sgd = run_trajectory(&mk(OptimizerKind::Sgd)).unwrap();
    let qng = run_trajectory(&mk(OptimizerKind::Qng)).unwrap();
    assert_eq!(sgd.grad_evals_per_iteration, qng.grad_evals_per_iteration);
    assert_eq!(sgd.grad_evals_per_iteration, 2 * 2 * 2);
    // both start from the same seeded initializations
    assert_eq!(sgd.seed_costs[0][0], qng.seed_costs[0][0]);
}

#[test]
fn exact_mode_trajectory_decreases_local_cost() {
    let cfg = TrajectoryConfig {
        n_qubits: 4,
        depth: 2,
        family: GraphFamily::Chain,
        cost: CostKind::LocalZAverage,
        optimizer: OptimizerKind::Sgd,
        step_size: 0.1,
        shots: None,
        iterations: 30,
        n_seeds: 4,
        base_seed: 8,
        metric_reg: 1e-3,
    };
    let traj = run_trajectory(&cfg).unwrap();
    let first = traj.points.first().unwrap().mean_cost;
    let last = traj.points.last().unwrap().mean_cost;
    assert!(last < first, "no decrease: {first} -> {last}");
}
