//! Statevector laboratory for measuring how Hessian entries of variational
//! quantum circuit cost functions fluctuate at random initialization.
//!
//! The crate provides, in dependency order:
//!
//! - [`sim`]: a dense statevector engine with exact expectation values,
//!   projective sampling, and exact derivative states;
//! - [`graph`] / [`ansatz`]: interaction graphs, layered hardware-efficient
//!   circuits, backward lightcones, and graph growth functions;
//! - [`observables`]: global parity, averaged single-qubit costs, and the
//!   transverse-field Ising energy density;
//! - [`derivatives`]: exact and finite-shot parameter-shift gradients and
//!   Hessian entries;
//! - [`ensemble`] / [`stats`]: random-initialization ensembles, variance and
//!   covariance estimators, bootstrap intervals, and scaling-law fits;
//! - [`bounds`]: dependency-graph variance bounds, covariance cutoff checks,
//!   a Haar second-moment oracle, and shot-budget calculators;
//! - [`spectral`] / [`optimize`]: Hessian eigenvalue diagnostics and
//!   SGD/QNG optimization trajectories under sampled gradients.
//!
//! The crate is `no_std` (with `alloc`); all I/O, file formats, and the
//! command-line driver live in the companion `plateau-probe` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod ansatz;
pub mod bounds;
pub mod derivatives;
pub mod ensemble;
pub mod graph;
pub mod linalg;
pub mod observables;
pub mod optimize;
pub mod pauli;
pub mod sim;
pub mod spectral;
pub mod stats;

pub use ansatz::{Circuit, Lightcone, ParamPoint};
pub use derivatives::{EstimateMode, HessianEstimate, ShiftRule};
pub use ensemble::{EnsembleSpec, EnsembleStats, SeedSample};
pub use graph::{GraphFamily, InteractionGraph};
pub use observables::{CostKind, Observable, PauliTerm};
pub use pauli::{PauliAxis, PauliString};
pub use sim::{Gate, GateKind, Statevector};

use thiserror::Error;

/// Largest qubit count accepted by the dense statevector engine.
pub const MAX_QUBITS: usize = 20;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{n_qubits} qubits exceed the dense statevector limit of {max}")]
    TooManyQubits { n_qubits: usize, max: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitIndex { index: usize, n_qubits: usize },
    #[error("parameter index {index} out of range for {param_count} parameters")]
    ParamIndex { index: usize, param_count: usize },
    #[error("parameterized gate applied without an angle")]
    MissingAngle,
    #[error("fixed gate applied with an angle")]
    UnexpectedAngle,
    #[error("state acts on {state} qubits but observable on {observable}")]
    QubitCountMismatch { state: usize, observable: usize },
    #[error("expected {expected} parameters, got {got}")]
    ParamCountMismatch { expected: usize, got: usize },
    #[error("expected {expected} amplitudes, got {got}")]
    AmplitudeCount { expected: usize, got: usize },
    #[error("duplicate qubit {index} in Pauli string")]
    DuplicateQubit { index: usize },
    #[error("support set is empty")]
    EmptySupport,
    #[error("graph family {family:?} does not support {n} vertices")]
    UnsupportedGraph { family: GraphFamily, n: usize },
    #[error("observable requires at least {min} qubits, got {n}")]
    ObservableTooSmall { n: usize, min: usize },
    #[error("observable has no terms")]
    EmptyObservable,
    #[error("term coefficient {coeff} exceeds unit norm for a term-wise local observable")]
    TermNormExceeded { coeff: f64 },
    #[error("observable terms do not split into computational/X measurement groups")]
    UnsupportedMeasurement,
    #[error("shot count must be positive")]
    ZeroShots,
    #[error("off-diagonal shift rule requires distinct indices, got ({index},{index})")]
    SameIndex { index: usize },
    #[error("{params} parameters exceed the Hessian assembly cap of {cap}")]
    HessianCap { params: usize, cap: usize },
    #[error("need at least {need} seeds, got {have}")]
    TooFewSeeds { have: usize, need: usize },
    #[error("need at least {need} data points, got {have}")]
    TooFewPoints { have: usize, need: usize },
    #[error("log-scale fit requires positive values")]
    NonpositiveVariance,
    #[error("{name} is outside its valid range")]
    InvalidTolerance { name: &'static str },
    #[error("observable is not term-wise local")]
    NotTermwiseLocal,
    #[error("estimate does not retain shifted cost values")]
    MissingShiftedCosts,
    #[error("Haar oracle limited to {max} qubits, got {n_qubits}")]
    HaarTooLarge { n_qubits: usize, max: usize },
    #[error("symmetric eigensolver failed to converge")]
    Eigensolver,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("expected a {expected} fit result")]
    WrongFitModel { expected: &'static str },
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
