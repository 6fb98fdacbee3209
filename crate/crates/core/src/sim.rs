//! Dense statevector engine: gates, exact expectation values, sampling.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::observables::Observable;
use crate::pauli::{PauliAxis, PauliString};
use crate::{Error, MAX_QUBITS, Result};

/// Gate variants supported by the engine.
///
/// Rotations use the convention `exp(-i theta P/2)` for Pauli generator `P`,
/// so a single `Ry(theta)` on `|0>` gives `<Z> = cos(theta)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    Ry {
        target: usize,
    },
    Rx {
        target: usize,
    },
    Rz {
        target: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// Fixed Pauli-string unitary.
    Pauli(PauliString),
}

/// A gate plus, for rotations, the index of the parameter that drives it.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    param_index: Option<usize>,
}

impl Gate {
    pub fn ry(target: usize, param_index: usize) -> Self {
        Self {
            kind: GateKind::Ry { target },
            param_index: Some(param_index),
        }
    }

    pub fn rx(target: usize, param_index: usize) -> Self {
        Self {
            kind: GateKind::Rx { target },
            param_index: Some(param_index),
        }
    }

    pub fn rz(target: usize, param_index: usize) -> Self {
        Self {
            kind: GateKind::Rz { target },
            param_index: Some(param_index),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Cnot { control, target },
            param_index: None,
        }
    }

    pub fn pauli(string: PauliString) -> Self {
        Self {
            kind: GateKind::Pauli(string),
            param_index: None,
        }
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn param_index(&self) -> Option<usize> {
        self.param_index
    }

    pub fn is_parameterized(&self) -> bool {
        self.param_index.is_some()
    }

    /// Visit every qubit the gate touches.
    pub fn for_each_qubit<F: FnMut(usize)>(&self, mut f: F) {
        match &self.kind {
            GateKind::Ry { target } | GateKind::Rx { target } | GateKind::Rz { target } => {
                f(*target)
            }
            GateKind::Cnot { control, target } => {
                f(*control);
                f(*target);
            }
            GateKind::Pauli(p) => p.support().for_each(f),
        }
    }

    /// Number of qubits the gate touches.
    pub fn locality(&self) -> usize {
        match &self.kind {
            GateKind::Ry { .. } | GateKind::Rx { .. } | GateKind::Rz { .. } => 1,
            GateKind::Cnot { .. } => 2,
            GateKind::Pauli(p) => p.weight(),
        }
    }

    /// Pauli string `P` of the generator `G = P/2`, for rotation gates.
    pub fn generator(&self) -> Option<PauliString> {
        match &self.kind {
            GateKind::Ry { target } => Some(PauliString::single(*target, PauliAxis::Y)),
            GateKind::Rx { target } => Some(PauliString::single(*target, PauliAxis::X)),
            GateKind::Rz { target } => Some(PauliString::single(*target, PauliAxis::Z)),
            _ => None,
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let mut bad = None;
        self.for_each_qubit(|q| {
            if q >= n_qubits && bad.is_none() {
                bad = Some(q);
            }
        });
        if let GateKind::Cnot { control, target } = self.kind
            && control == target
        {
            bad = Some(target);
        }
        match bad {
            Some(index) => Err(Error::QubitIndex { index, n_qubits }),
            None => Ok(()),
        }
    }
}

/// Dense `2^n`-amplitude state. Qubit `q` is bit `q` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros computational basis state.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, 0)
    }

    /// A single computational basis state.
    pub fn basis_state(n_qubits: usize, index: u64) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits,
                max: MAX_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if index as usize >= dim {
            return Err(Error::QubitIndex {
                index: index as usize,
                n_qubits,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits,
                max: MAX_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if amps.len() != dim {
            return Err(Error::AmplitudeCount {
                expected: dim,
                got: amps.len(),
            });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Reset to `|0...0>` without reallocating.
    pub fn reset_zero(&mut self) {
        self.amps.fill(Complex64::new(0.0, 0.0));
        self.amps[0] = Complex64::new(1.0, 0.0);
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply a gate; `angle` must be present exactly for parameterized gates.
    pub fn apply_gate(&mut self, gate: &Gate, angle: Option<f64>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match (gate.is_parameterized(), angle) {
            (true, None) => return Err(Error::MissingAngle),
            (false, Some(_)) => return Err(Error::UnexpectedAngle),
            _ => {}
        }
        match (&gate.kind, angle) {
            (GateKind::Ry { target }, Some(theta)) => self.apply_ry(*target, theta),
            (GateKind::Rx { target }, Some(theta)) => self.apply_rx(*target, theta),
            (GateKind::Rz { target }, Some(theta)) => self.apply_rz(*target, theta),
            (GateKind::Cnot { control, target }, None) => self.apply_cnot(*control, *target),
            (GateKind::Pauli(p), None) => self.apply_pauli(p)?,
            _ => unreachable!("angle presence checked above"),
        }
        Ok(())
    }

    fn apply_ry(&mut self, target: usize, theta: f64) {
        let c = (theta / 2.0).cos();
        let s = (theta / 2.0).sin();
        let bit = 1usize << target;
        for base in 0..self.amps.len() {
            if base & bit == 0 {
                let a0 = self.amps[base];
                let a1 = self.amps[base | bit];
                self.amps[base] = c * a0 - s * a1;
                self.amps[base | bit] = s * a0 + c * a1;
            }
        }
    }

    fn apply_rx(&mut self, target: usize, theta: f64) {
        let c = (theta / 2.0).cos();
        let ms = Complex64::new(0.0, -(theta / 2.0).sin());
        let bit = 1usize << target;
        for base in 0..self.amps.len() {
            if base & bit == 0 {
                let a0 = self.amps[base];
                let a1 = self.amps[base | bit];
                self.amps[base] = c * a0 + ms * a1;
                self.amps[base | bit] = ms * a0 + c * a1;
            }
        }
    }

    fn apply_rz(&mut self, target: usize, theta: f64) {
        let c = (theta / 2.0).cos();
        let s = (theta / 2.0).sin();
        let ph0 = Complex64::new(c, -s);
        let ph1 = Complex64::new(c, s);
        let bit = 1usize << target;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & bit == 0 { ph0 } else { ph1 };
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    /// Apply a Pauli-string unitary in place.
    pub fn apply_pauli(&mut self, string: &PauliString) -> Result<()> {
        let m = string.masks(self.n_qubits)?;
        let flip = m.flip as usize;
        if flip == 0 {
            for (i, a) in self.amps.iter_mut().enumerate() {
                *a *= m.phase(i as u64);
            }
        } else {
            for i in 0..self.amps.len() {
                let j = i ^ flip;
                if j > i {
                    let pi = m.phase(i as u64);
                    let pj = m.phase(j as u64);
                    let ai = self.amps[i];
                    let aj = self.amps[j];
                    self.amps[j] = pi * ai;
                    self.amps[i] = pj * aj;
                }
            }
        }
        Ok(())
    }

    /// Hadamard on every qubit (X <-> Z basis change).
    pub fn apply_hadamard_all(&mut self) {
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        for q in 0..self.n_qubits {
            let bit = 1usize << q;
            for base in 0..self.amps.len() {
                if base & bit == 0 {
                    let a0 = self.amps[base];
                    let a1 = self.amps[base | bit];
                    self.amps[base] = (a0 + a1) * inv_sqrt2;
                    self.amps[base | bit] = (a0 - a1) * inv_sqrt2;
                }
            }
        }
    }

    /// `<psi|P|psi>` for a single Pauli string.
    pub fn pauli_expectation(&self, string: &PauliString) -> Result<f64> {
        let m = string.masks(self.n_qubits)?;
        let flip = m.flip as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, a) in self.amps.iter().enumerate() {
            acc += self.amps[i ^ flip].conj() * m.phase(i as u64) * a;
        }
        Ok(acc.re)
    }

    /// `<self|P|other>` for a Pauli string.
    pub fn pauli_matrix_element(&self, string: &PauliString, other: &Self) -> Result<Complex64> {
        let m = string.masks(self.n_qubits)?;
        let flip = m.flip as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, a) in other.amps.iter().enumerate() {
            acc += self.amps[i ^ flip].conj() * m.phase(i as u64) * a;
        }
        Ok(acc)
    }

    /// `<self|O|other>`.
    pub fn matrix_element(&self, obs: &Observable, other: &Self) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for term in obs.terms() {
            total += term.coeff() * self.pauli_matrix_element(term.string(), other)?;
        }
        Ok(total)
    }

    /// `sum_t coeff_t <psi|P_t|psi>`.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        if obs.n_qubits() != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                state: self.n_qubits,
                observable: obs.n_qubits(),
            });
        }
        let mut total = 0.0;
        for term in obs.terms() {
            total += term.coeff() * self.pauli_expectation(term.string())?;
        }
        Ok(total)
    }

    /// Sampler over computational basis outcomes of this state.
    pub fn outcome_sampler(&self) -> OutcomeSampler {
        let mut cum = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cum.push(acc);
        }
        OutcomeSampler { cum }
    }
}

/// Inverse-CDF sampler over basis-state indices.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    cum: Vec<f64>,
}

impl OutcomeSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = *self.cum.last().expect("nonempty state");
        let u: f64 = rng.random::<f64>() * total;
        let idx = self.cum.partition_point(|&c| c <= u);
        idx.min(self.cum.len() - 1) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliAxis;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z_exp(state: &Statevector, q: usize) -> f64 {
        state
            .pauli_expectation(&PauliString::single(q, PauliAxis::Z))
            .unwrap()
    }

    #[test]
    fn ry_zero_is_identity() {
        let mut state = Statevector::basis_state(2, 0b10).unwrap();
        let before = state.clone();
        state.apply_gate(&Gate::ry(0, 0), Some(0.0)).unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn ry_pi_flips_z() {
        let mut state = Statevector::zero(1).unwrap();
        state
            .apply_gate(&Gate::ry(0, 0), Some(core::f64::consts::PI))
            .unwrap();
        assert_abs_diff_eq!(z_exp(&state, 0), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn ry_gives_cos_theta() {
        for theta in [0.3, 1.1, 2.7, -0.9] {
            let mut state = Statevector::zero(1).unwrap();
            state.apply_gate(&Gate::ry(0, 0), Some(theta)).unwrap();
            assert_abs_diff_eq!(z_exp(&state, 0), theta.cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        // control = qubit 1 is set, target = qubit 0 clear
        let mut state = Statevector::basis_state(2, 0b10).unwrap();
        state.apply_gate(&Gate::cnot(1, 0), None).unwrap();
        assert_eq!(state, Statevector::basis_state(2, 0b11).unwrap());
    }

    #[test]
    fn angle_presence_enforced() {
        let mut state = Statevector::zero(2).unwrap();
        assert_eq!(
            state.apply_gate(&Gate::ry(0, 0), None),
            Err(Error::MissingAngle)
        );
        assert_eq!(
            state.apply_gate(&Gate::cnot(0, 1), Some(1.0)),
            Err(Error::UnexpectedAngle)
        );
    }

    #[test]
    fn gate_indices_validated() {
        let mut state = Statevector::zero(2).unwrap();
        assert!(state.apply_gate(&Gate::ry(2, 0), Some(0.1)).is_err());
        assert!(state.apply_gate(&Gate::cnot(0, 0), None).is_err());
    }

    #[test]
    fn norm_preserved_by_random_gates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut state = Statevector::zero(3).unwrap();
        for step in 0..60 {
            let q = step % 3;
            match step % 4 {
                0 => state.apply_gate(&Gate::ry(q, 0), Some(rng.random::<f64>() * 6.0)),
                1 => state.apply_gate(&Gate::rx(q, 0), Some(rng.random::<f64>() * 6.0)),
                2 => state.apply_gate(&Gate::rz(q, 0), Some(rng.random::<f64>() * 6.0)),
                _ => state.apply_gate(&Gate::cnot(q, (q + 1) % 3), None),
            }
            .unwrap();
        }
        assert_abs_diff_eq!(state.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pauli_apply_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = Statevector::zero(3).unwrap();
        for q in 0..3 {
            state
                .apply_gate(&Gate::ry(q, 0), Some(rng.random::<f64>() * 6.0))
                .unwrap();
        }
        let p = PauliString::from_pairs([(0, PauliAxis::Y), (2, PauliAxis::X)]).unwrap();
        let before = state.clone();
        state.apply_pauli(&p).unwrap();
        state.apply_pauli(&p).unwrap();
        for (a, b) in state.amplitudes().iter().zip(before.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm_sqr(), 0.0, epsilon = 1e-24);
        }
    }

    #[test]
    fn hadamard_all_makes_plus_state() {
        let mut state = Statevector::zero(2).unwrap();
        state.apply_hadamard_all();
        for a in state.amplitudes() {
            assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-12);
        }
        let x0 = state
            .pauli_expectation(&PauliString::single(0, PauliAxis::X))
            .unwrap();
        assert_abs_diff_eq!(x0, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sampler_is_deterministic_per_seed() {
        let mut state = Statevector::zero(2).unwrap();
        state.apply_gate(&Gate::ry(0, 0), Some(1.1)).unwrap();
        state.apply_gate(&Gate::ry(1, 1), Some(0.4)).unwrap();
        let sampler = state.outcome_sampler();
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            assert_eq!(sampler.draw(&mut a), sampler.draw(&mut b));
        }
    }

    #[test]
    fn deterministic_state_always_samples_same_outcome() {
        let state = Statevector::basis_state(3, 0b101).unwrap();
        let sampler = state.outcome_sampler();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert_eq!(sampler.draw(&mut rng), 0b101);
        }
    }

    #[test]
    fn too_many_qubits_rejected() {
        assert!(matches!(
            Statevector::zero(MAX_QUBITS + 1),
            Err(Error::TooManyQubits { .. })
        ));
    }
}
