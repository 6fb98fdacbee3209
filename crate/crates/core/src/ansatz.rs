//! Layered hardware-efficient circuits, parameter points, backward lightcones.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::graph::{GraphFamily, InteractionGraph};
use crate::sim::{Gate, Statevector};
use crate::{Error, Result};

/// Wrap an angle into `[0, 2*pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let tau = core::f64::consts::TAU;
    let r = x % tau;
    if r < 0.0 { r + tau } else { r }
}

/// A point on the `M`-torus of circuit parameters.
///
/// Values are stored as given; shift-addition wraps componentwise mod `2*pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint {
    theta: Vec<f64>,
}

impl ParamPoint {
    pub fn new(theta: Vec<f64>) -> Self {
        Self { theta }
    }

    pub fn zeros(m: usize) -> Self {
        Self {
            theta: alloc::vec![0.0; m],
        }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn get(&self, j: usize) -> Result<f64> {
        self.theta.get(j).copied().ok_or(Error::ParamIndex {
            index: j,
            param_count: self.theta.len(),
        })
    }

    pub fn set(&mut self, j: usize, value: f64) -> Result<()> {
        let count = self.theta.len();
        match self.theta.get_mut(j) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::ParamIndex {
                index: j,
                param_count: count,
            }),
        }
    }

    /// Copy with sparse shifts added componentwise mod `2*pi`.
    pub fn shifted(&self, shifts: &[(usize, f64)]) -> Result<ParamPoint> {
        let mut theta = self.theta.clone();
        for &(j, s) in shifts {
            let slot = theta.get_mut(j).ok_or(Error::ParamIndex {
                index: j,
                param_count: self.theta.len(),
            })?;
            *slot = wrap_angle(*slot + s);
        }
        Ok(ParamPoint { theta })
    }
}

/// Backward lightcone of an observable support: the qubits and parameters
/// that can influence its expectation value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lightcone {
    pub qubits: BTreeSet<usize>,
    pub params: BTreeSet<usize>,
}

/// A layered gate program with unique parameter indices and an interaction
/// graph describing its entangler architecture.
#[derive(Debug, Clone)]
pub struct Circuit {
    n_qubits: usize,
    depth: usize,
    gates: Vec<Gate>,
    param_count: usize,
    /// Gate position of each parameter, in parameter order.
    param_gate: Vec<usize>,
    graph: InteractionGraph,
    gate_locality: usize,
}

impl Circuit {
    /// Brickwork hardware-efficient ansatz: per layer, nearest-neighbor CNOT
    /// bricks on the family's graph followed by one fresh `Ry` per qubit.
    ///
    /// Chain/ring layers pair even indices then odd indices; 2D grids
    /// alternate horizontal and vertical bricks across layers; the complete
    /// family entangles along a fixed ring (the complete graph itself is
    /// used only on the bound side).
    pub fn hardware_efficient(n: usize, layers: usize, family: GraphFamily) -> Result<Self> {
        if n == 0 || n > crate::MAX_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits: n,
                max: crate::MAX_QUBITS,
            });
        }
        let graph = InteractionGraph::for_family(family, n)?;
        let mut gates = Vec::new();
        let mut param = 0usize;
        for layer in 0..layers {
            match family {
                GraphFamily::Chain => push_line_bricks(&mut gates, n, false),
                GraphFamily::Ring | GraphFamily::Complete => {
                    if n < 3 {
                        push_line_bricks(&mut gates, n, false)
                    } else {
                        push_line_bricks(&mut gates, n, true)
                    }
                }
                GraphFamily::Grid2d => {
                    let rows = InteractionGraph::grid_rows(n)
                        .ok_or(Error::UnsupportedGraph { family, n })?;
                    push_grid_bricks(&mut gates, rows, n / rows, layer % 2 == 1);
                }
            }
            for q in 0..n {
                gates.push(Gate::ry(q, param));
                param += 1;
            }
        }
        Self::from_gates(n, layers, gates, graph)
    }

    /// Assemble a circuit from an explicit gate list, checking that every
    /// parameter index in `[0, M)` appears exactly once.
    pub fn from_gates(
        n_qubits: usize,
        depth: usize,
        gates: Vec<Gate>,
        graph: InteractionGraph,
    ) -> Result<Self> {
        if n_qubits == 0 || n_qubits > crate::MAX_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits,
                max: crate::MAX_QUBITS,
            });
        }
        let param_count = gates.iter().filter(|g| g.is_parameterized()).count();
        let mut param_gate = alloc::vec![usize::MAX; param_count];
        let mut gate_locality = 1;
        for (pos, gate) in gates.iter().enumerate() {
            gate.validate(n_qubits)?;
            gate_locality = gate_locality.max(gate.locality());
            if let Some(j) = gate.param_index() {
                if j >= param_count || param_gate[j] != usize::MAX {
                    return Err(Error::ParamIndex {
                        index: j,
                        param_count,
                    });
                }
                param_gate[j] = pos;
            }
        }
        Ok(Self {
            n_qubits,
            depth,
            gates,
            param_count,
            param_gate,
            graph,
            gate_locality,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn param_count(&self) -> usize {
        self.param_count
    }

    pub fn graph(&self) -> &InteractionGraph {
        &self.graph
    }

    /// Largest qubit count touched by any single gate (2 for CNOT brickwork).
    pub fn gate_locality(&self) -> usize {
        self.gate_locality
    }

    fn check_theta(&self, theta: &ParamPoint) -> Result<()> {
        if theta.len() != self.param_count {
            return Err(Error::ParamCountMismatch {
                expected: self.param_count,
                got: theta.len(),
            });
        }
        Ok(())
    }

    /// Run the circuit on `|0...0>` into a caller-owned buffer.
    pub fn prepare_into(&self, theta: &ParamPoint, state: &mut Statevector) -> Result<()> {
        self.check_theta(theta)?;
        if state.n_qubits() != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                state: state.n_qubits(),
                observable: self.n_qubits,
            });
        }
        state.reset_zero();
        for gate in &self.gates {
            let angle = match gate.param_index() {
                Some(j) => Some(theta.get(j)?),
                None => None,
            };
            state.apply_gate(gate, angle)?;
        }
        Ok(())
    }

    pub fn state(&self, theta: &ParamPoint) -> Result<Statevector> {
        let mut state = Statevector::zero(self.n_qubits)?;
        self.prepare_into(theta, &mut state)?;
        Ok(state)
    }

    /// Exact (non-normalized) derivative state `d|psi>/d theta_j`.
    ///
    /// Applies gates through the one driven by parameter `j`, inserts the
    /// generator `-i P_j / 2`, then applies the remaining gates. Its norm is
    /// exactly 1/2 under the two-point-spectrum convention.
    pub fn derivative_state(&self, theta: &ParamPoint, j: usize) -> Result<Statevector> {
        self.check_theta(theta)?;
        let gate_pos = *self.param_gate.get(j).ok_or(Error::ParamIndex {
            index: j,
            param_count: self.param_count,
        })?;
        let mut state = Statevector::zero(self.n_qubits)?;
        for (pos, gate) in self.gates.iter().enumerate() {
            let angle = match gate.param_index() {
                Some(p) => Some(theta.get(p)?),
                None => None,
            };
            state.apply_gate(gate, angle)?;
            if pos == gate_pos {
                let generator = gate
                    .generator()
                    .expect("parameterized gate has a generator");
                state.apply_pauli(&generator)?;
                state.scale(Complex64::new(0.0, -0.5));
            }
        }
        Ok(state)
    }

    /// Exact backward lightcone of a qubit support set: walks the gate list
    /// in reverse, absorbing any gate whose qubits intersect the cone.
    pub fn backward_lightcone(&self, support: &[usize]) -> Result<Lightcone> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut qubits = BTreeSet::new();
        for &q in support {
            if q >= self.n_qubits {
                return Err(Error::QubitIndex {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
            qubits.insert(q);
        }
        let mut params = BTreeSet::new();
        for gate in self.gates.iter().rev() {
            let mut touches = false;
            gate.for_each_qubit(|q| touches |= qubits.contains(&q));
            if touches {
                gate.for_each_qubit(|q| {
                    qubits.insert(q);
                });
                if let Some(j) = gate.param_index() {
                    params.insert(j);
                }
            }
        }
        Ok(Lightcone { qubits, params })
    }
}

/// Even-index then odd-index CNOT bricks along a line, optionally closing
/// the ring through the wrap-around pair.
fn push_line_bricks(gates: &mut Vec<Gate>, n: usize, ring: bool) {
    let limit = if ring { n } else { n.saturating_sub(1) };
    for parity in [0usize, 1usize] {
        let mut i = parity;
        while i < limit {
            gates.push(Gate::cnot(i, (i + 1) % n));
            i += 2;
        }
    }
}

/// Horizontal or vertical CNOT bricks on a `rows x cols` grid.
fn push_grid_bricks(gates: &mut Vec<Gate>, rows: usize, cols: usize, vertical: bool) {
    if vertical {
        for c in 0..cols {
            for parity in [0usize, 1usize] {
                let mut r = parity;
                while r + 1 < rows {
                    gates.push(Gate::cnot(r * cols + c, (r + 1) * cols + c));
                    r += 2;
                }
            }
        }
    } else {
        for r in 0..rows {
            for parity in [0usize, 1usize] {
                let mut c = parity;
                while c + 1 < cols {
                    gates.push(Gate::cnot(r * cols + c, r * cols + c + 1));
                    c += 2;
                }
            }
        }
    }
}
