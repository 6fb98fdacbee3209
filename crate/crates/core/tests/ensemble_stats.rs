//! Ensemble statistics: initialization measure, variance identities,
//! shift invariance, bootstrap behavior, and the shot-noise decomposition.

mod common;

use plateau_core::derivatives::EstimateMode;
use plateau_core::ensemble::{
    self, EnsembleSpec, covariance_quadratic_check, draw_initialization, run_ensemble,
    shift_invariance_check,
};
use plateau_core::stats::{self, ks_uniform01};
use plateau_core::{Circuit, CostKind, GraphFamily, Observable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn initialization_measure_is_uniform() {
    // pool many draws and KS-test against U[0,1) after rescaling
    let mut pooled = Vec::with_capacity(100_000);
    for seed in 0..1000 {
        let theta = draw_initialization(100, seed);
        pooled.extend(theta.as_slice().iter().map(|t| t / std::f64::consts::TAU));
    }
    let ks = ks_uniform01(&pooled).unwrap();
    assert!(ks.p_value > 0.01, "p = {}", ks.p_value);
}

#[test]
fn variance_is_self_consistent_across_ensemble_sizes() {
    // analytic value: C = cos(t0) cos(t1), so Var(H_00) = 1/4
    let mut spec = EnsembleSpec {
        n_qubits: 2,
        depth: 1,
        family: GraphFamily::Chain,
        cost: CostKind::GlobalParity,
        entry: (0, 0),
        n_seeds: 500,
        base_seed: 42,
        mode: EstimateMode::Exact,
    };
    let small = run_ensemble(&spec).unwrap();
    spec.n_seeds = 5000;
    let large = run_ensemble(&spec).unwrap();
    // the refined estimate sits inside the small run's interval, and the
    // two intervals overlap; the small point estimate itself carries more
    // sampling error than the width of the refined interval
    assert!(
        large.var_hat >= small.ci95.0 && large.var_hat <= small.ci95.1,
        "refined {} outside small-run CI {:?}",
        large.var_hat,
        small.ci95
    );
    assert!(
        small.ci95.0 <= large.ci95.1 && large.ci95.0 <= small.ci95.1,
        "CIs disjoint: {:?} vs {:?}",
        small.ci95,
        large.ci95
    );
    // both runs cover the analytic variance
    assert!(
        small.ci95.0 <= 0.25 && 0.25 <= small.ci95.1,
        "{:?}",
        small.ci95
    );
    assert!(
        large.ci95.0 <= 0.25 && 0.25 <= large.ci95.1,
        "{:?}",
        large.ci95
    );
}

#[test]
fn quadratic_identity_on_larger_ensembles() {
    for (cost, entry) in [
        (CostKind::GlobalParity, (0, 0)),
        (CostKind::GlobalParity, (1, 6)),
        (CostKind::LocalZAverage, (2, 2)),
        (CostKind::LocalZAverage, (0, 5)),
    ] {
        let spec = EnsembleSpec {
            n_qubits: 4,
            depth: 2,
            family: GraphFamily::Chain,
            cost,
            entry,
            n_seeds: 150,
            base_seed: 7,
            mode: EstimateMode::Exact,
        };
        let st = run_ensemble(&spec).unwrap();
        let gap = covariance_quadratic_check(&st, &spec.rule()).unwrap();
        assert!(gap < 1e-12, "gap {gap} for {cost:?} {entry:?}");
    }
}

#[test]
fn shift_invariance_in_distribution() {
    let circuit = Circuit::hardware_efficient(4, 2, GraphFamily::Chain).unwrap();
    let obs = Observable::global_parity(4).unwrap();
    let shift = [(1usize, std::f64::consts::FRAC_PI_2)];
    let check = shift_invariance_check(&circuit, &obs, &shift, 2000, 3).unwrap();
    assert!(check.ks.p_value > 0.01, "p = {}", check.ks.p_value);

    // sample variances agree within bootstrap CIs
    let mut rng_a = ChaCha8Rng::seed_from_u64(1);
    let mut rng_b = ChaCha8Rng::seed_from_u64(2);
    let ci_a = stats::bootstrap_variance_ci(&check.baseline, 2000, 0.95, &mut rng_a).unwrap();
    let var_b = stats::variance_unbiased(&check.shifted).unwrap();
    let ci_b = stats::bootstrap_variance_ci(&check.shifted, 2000, 0.95, &mut rng_b).unwrap();
    let var_a = stats::variance_unbiased(&check.baseline).unwrap();
    assert!(
        var_b >= ci_a.0 && var_b <= ci_a.1,
        "{var_b} outside {ci_a:?}"
    );
    assert!(
        var_a >= ci_b.0 && var_a <= ci_b.1,
        "{var_a} outside {ci_b:?}"
    );
}

#[test]
fn total_variance_decomposes_into_init_and_shot_parts() {
    // matched ensembles: Var_total(shots) ~= Var_exact + E[Var_sh]
    let base = EnsembleSpec {
        n_qubits: 4,
        depth: 2,
        family: GraphFamily::Chain,
        cost: CostKind::GlobalParity,
        entry: (0, 0),
        n_seeds: 400,
        base_seed: 11,
        mode: EstimateMode::Exact,
    };
    let exact = run_ensemble(&base).unwrap();

    let shots = 64u64;
    let mut shot_spec = base.clone();
    shot_spec.mode = EstimateMode::Shots(shots);
    let total = run_ensemble(&shot_spec).unwrap();

    // mean conditional shot variance, measured directly at the same draws
    let circuit = base.circuit().unwrap();
    let obs = base.observable().unwrap();
    let rule = base.rule();
    let mut rng = ChaCha8Rng::seed_from_u64(999);
    let mut shot_var_acc = 0.0;
    let n_theta = 60;
    for i in 0..n_theta {
        let theta = ensemble::draw_initialization_from(
            &mut ensemble::seed_stream(base.base_seed, i),
            circuit.param_count(),
        );
        let mut eval = plateau_core::derivatives::CostEvaluator::for_circuit(&circuit).unwrap();
        let reps = 40;
        let mut values = Vec::with_capacity(reps);
        for _ in 0..reps {
            let costs = eval
                .rule_costs_shots(&circuit, &obs, &theta, &rule, shots, &mut rng)
                .unwrap();
            values.push(rule.combine(&costs));
        }
        shot_var_acc += stats::variance_unbiased(&values).unwrap();
    }
    let mean_shot_var = shot_var_acc / n_theta as f64;

    let predicted = exact.var_hat + mean_shot_var;
    // agree within the (wider) shot-mode bootstrap interval, re-centered
    let half_width = (total.ci95.1 - total.ci95.0) / 2.0;
    assert!(
        (total.var_hat - predicted).abs() < 2.0 * half_width,
        "total {} vs predicted {} (half width {half_width})",
        total.var_hat,
        predicted
    );
}

#[test]
fn bootstrap_interval_width_shrinks_with_sample_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draw = |rng: &mut ChaCha8Rng, n: usize| -> Vec<f64> {
        (0..n)
            .map(|_| {
                // sum of uniforms as a light-tailed stand-in for normal data
                (0..12).map(|_| rng.random::<f64>()).sum::<f64>() - 6.0
            })
            .collect()
    };
    let width = |values: &[f64], rng: &mut ChaCha8Rng| {
        let (lo, hi) = stats::bootstrap_variance_ci(values, 2000, 0.95, rng).unwrap();
        hi - lo
    };
    let mut w_small_acc = 0.0;
    let mut w_big_acc = 0.0;
    for _ in 0..10 {
        let small = draw(&mut rng, 100);
        let big = draw(&mut rng, 1600);
        w_small_acc += width(&small, &mut rng);
        w_big_acc += width(&big, &mut rng);
    }
    let ratio = w_small_acc / w_big_acc;
    // 16x the sample should shrink the width about 4x
    assert!((2.0..8.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn bootstrap_interval_covers_true_variance() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let true_var = 12.0 / 12.0; // variance of the sum-of-12-uniforms proxy
    let trials = 500;
    let mut covered = 0;
    for _ in 0..trials {
        let values: Vec<f64> = (0..80)
            .map(|_| (0..12).map(|_| rng.random::<f64>()).sum::<f64>() - 6.0)
            .collect();
        let (lo, hi) = stats::bootstrap_variance_ci(&values, 400, 0.95, &mut rng).unwrap();
        if true_var >= lo && true_var <= hi {
            covered += 1;
        }
    }
    let coverage = covered as f64 / trials as f64;
    assert!(coverage >= 0.90, "coverage {coverage}");
}

#[test]
fn shot_mode_ensembles_are_deterministic_and_distinct_from_exact() {
    let spec = EnsembleSpec {
        n_qubits: 3,
        depth: 2,
        family: GraphFamily::Chain,
        cost: CostKind::TfimDensity {
            coupling: 1.0,
            field: 1.0,
        },
        entry: (1, 1),
        n_seeds: 50,
        base_seed: 23,
        mode: EstimateMode::Shots(32),
    };
    let a = run_ensemble(&spec).unwrap();
    let b = run_ensemble(&spec).unwrap();
    assert_eq!(a.samples, b.samples);
    let mut exact_spec = spec.clone();
    exact_spec.mode = EstimateMode::Exact;
    let exact = run_ensemble(&exact_spec).unwrap();
    // shot noise inflates the variance
    assert!(a.var_hat > exact.var_hat);
}
