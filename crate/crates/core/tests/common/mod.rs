//! Independent oracles shared by the integration tests: dense-matrix
//! contraction for expectation values and finite differences for
//! derivatives. These never touch the parameter-shift or masked-expectation
//! paths they are used to check.
#![allow(dead_code)] // each test binary uses its own subset

use num_complex::Complex64;
use plateau_core::{Circuit, Observable, ParamPoint, PauliString, Statevector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Dense row-major complex matrix.
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    fn add(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] += v;
    }
}

/// Explicit matrix of a Pauli string via its column action, built from the
/// textbook single-qubit matrices and tensor-product bit rules.
pub fn pauli_matrix(n_qubits: usize, string: &PauliString) -> DenseMatrix {
    use plateau_core::PauliAxis;
    let dim = 1usize << n_qubits;
    let mut m = DenseMatrix::zeros(dim);
    for col in 0..dim {
        let mut row = col;
        let mut factor = Complex64::new(1.0, 0.0);
        for (q, axis) in string.iter() {
            let bit = 1usize << q;
            let set = col & bit != 0;
            match axis {
                PauliAxis::X => row ^= bit,
                PauliAxis::Y => {
                    row ^= bit;
                    // Y|0> = i|1>, Y|1> = -i|0>
                    factor *= if set {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    };
                }
                PauliAxis::Z => {
                    if set {
                        factor = -factor;
                    }
                }
            }
        }
        m.add(row, col, factor);
    }
    m
}

/// Dense matrix of a whole observable.
pub fn observable_matrix(obs: &Observable) -> DenseMatrix {
    let dim = 1usize << obs.n_qubits();
    let mut m = DenseMatrix::zeros(dim);
    for term in obs.terms() {
        let p = pauli_matrix(obs.n_qubits(), term.string());
        for i in 0..dim * dim {
            m.data[i] += term.coeff() * p.data[i];
        }
    }
    m
}

/// `<psi|M|psi>` by direct double contraction.
pub fn dense_expectation(m: &DenseMatrix, amps: &[Complex64]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m.dim {
        for j in 0..m.dim {
            acc += amps[i].conj() * m.get(i, j) * amps[j];
        }
    }
    acc.re
}

/// Haar-like random state from normalized complex Gaussians.
pub fn random_state<R: Rng>(n_qubits: usize, rng: &mut R) -> Statevector {
    let dim = 1usize << n_qubits;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    Statevector::from_amplitudes(n_qubits, amps).unwrap()
}

pub fn random_theta<R: Rng>(m: usize, rng: &mut R) -> ParamPoint {
    ParamPoint::new(
        (0..m)
            .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
            .collect(),
    )
}

/// Central-difference gradient of a cost closure.
pub fn fd_gradient<F: FnMut(&ParamPoint) -> f64>(mut f: F, theta: &ParamPoint, h: f64) -> Vec<f64> {
    (0..theta.len())
        .map(|j| {
            let plus = f(&theta.shifted(&[(j, h)]).unwrap());
            let minus = f(&theta.shifted(&[(j, -h)]).unwrap());
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

/// Central second-difference Hessian entry of a cost closure.
pub fn fd_hessian_entry<F: FnMut(&ParamPoint) -> f64>(
    mut f: F,
    theta: &ParamPoint,
    j: usize,
    k: usize,
    h: f64,
) -> f64 {
    if j == k {
        let plus = f(&theta.shifted(&[(j, h)]).unwrap());
        let center = f(theta);
        let minus = f(&theta.shifted(&[(j, -h)]).unwrap());
        (plus - 2.0 * center + minus) / (h * h)
    } else {
        let pp = f(&theta.shifted(&[(j, h), (k, h)]).unwrap());
        let pm = f(&theta.shifted(&[(j, h), (k, -h)]).unwrap());
        let mp = f(&theta.shifted(&[(j, -h), (k, h)]).unwrap());
        let mm = f(&theta.shifted(&[(j, -h), (k, -h)]).unwrap());
        (pp - pm - mp + mm) / (4.0 * h * h)
    }
}

/// Parameter offset without torus wrapping: the statevector itself is only
/// 4*pi-periodic (a 2*pi shift flips its global sign), so amplitude-level
/// differences must stay off the wrap.
pub fn offset_raw(theta: &ParamPoint, j: usize, delta: f64) -> ParamPoint {
    let mut v = theta.as_slice().to_vec();
    v[j] += delta;
    ParamPoint::new(v)
}

/// Central difference of the statevector amplitudes along one parameter.
pub fn fd_state_derivative(
    circuit: &Circuit,
    theta: &ParamPoint,
    j: usize,
    h: f64,
) -> Vec<Complex64> {
    let plus = circuit.state(&offset_raw(theta, j, h)).unwrap();
    let minus = circuit.state(&offset_raw(theta, j, -h)).unwrap();
    plus.amplitudes()
        .iter()
        .zip(minus.amplitudes())
        .map(|(p, m)| (p - m) / (2.0 * h))
        .collect()
}
