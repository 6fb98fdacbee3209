//! Sparse Pauli strings over qubit indices.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Single-qubit Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// A tensor product of single-qubit Paulis, stored sparsely by qubit index.
///
/// The empty string is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PauliString {
    ops: BTreeMap<usize, PauliAxis>,
}

impl PauliString {
    /// Identity string.
    pub fn identity() -> Self {
        Self::default()
    }

    /// Single-qubit Pauli.
    pub fn single(qubit: usize, axis: PauliAxis) -> Self {
        let mut ops = BTreeMap::new();
        ops.insert(qubit, axis);
        Self { ops }
    }

    /// Build from (qubit, axis) pairs; rejects duplicate qubits.
    pub fn from_pairs<I: IntoIterator<Item = (usize, PauliAxis)>>(pairs: I) -> Result<Self> {
        let mut ops = BTreeMap::new();
        for (qubit, axis) in pairs {
            if ops.insert(qubit, axis).is_some() {
                return Err(Error::DuplicateQubit { index: qubit });
            }
        }
        Ok(Self { ops })
    }

    /// Z on every listed qubit.
    pub fn z_on<I: IntoIterator<Item = usize>>(qubits: I) -> Result<Self> {
        Self::from_pairs(qubits.into_iter().map(|q| (q, PauliAxis::Z)))
    }

    pub fn is_identity(&self) -> bool {
        self.ops.is_empty()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.ops.len()
    }

    /// Qubits acted on, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.keys().copied()
    }

    pub fn support_vec(&self) -> Vec<usize> {
        self.support().collect()
    }

    pub fn axis_on(&self, qubit: usize) -> Option<PauliAxis> {
        self.ops.get(&qubit).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, PauliAxis)> + '_ {
        self.ops.iter().map(|(&q, &a)| (q, a))
    }

    /// Largest qubit index touched, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.ops.keys().next_back().copied()
    }

    /// Bit masks driving basis-state action, for a register of `n_qubits`.
    ///
    /// Acting on a basis state `|i>`, the string maps it to
    /// `phase(i) * |i ^ flip|` with
    /// `phase(i) = i^{y_count} * (-1)^{popcount(i & sign)}`.
    pub fn masks(&self, n_qubits: usize) -> Result<PauliMasks> {
        let mut flip = 0u64;
        let mut sign = 0u64;
        let mut y_count = 0u32;
        for (&qubit, &axis) in &self.ops {
            if qubit >= n_qubits {
                return Err(Error::QubitIndex {
                    index: qubit,
                    n_qubits,
                });
            }
            let bit = 1u64 << qubit;
            match axis {
                PauliAxis::X => flip |= bit,
                PauliAxis::Y => {
                    flip |= bit;
                    sign |= bit;
                    y_count += 1;
                }
                PauliAxis::Z => sign |= bit,
            }
        }
        Ok(PauliMasks {
            flip,
            sign,
            y_count,
        })
    }
}

/// Precomputed action of a [`PauliString`] on computational basis states.
#[derive(Debug, Clone, Copy)]
pub struct PauliMasks {
    /// Bits flipped by the string (X and Y qubits).
    pub flip: u64,
    /// Bits contributing a (-1) phase (Y and Z qubits).
    pub sign: u64,
    /// Number of Y factors; contributes a global i^y_count.
    pub y_count: u32,
}

impl PauliMasks {
    /// Phase acquired by basis state `index` (before the bit flip).
    pub fn phase(&self, index: u64) -> Complex64 {
        let neg = (index & self.sign).count_ones() & 1 == 1;
        let mut ph = match self.y_count & 3 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if neg {
            ph = -ph;
        }
        ph
    }
}
