//! Cost-function observables: weighted Pauli-string sums with support,
//! norm, and measurement-group bookkeeping.

use alloc::vec::Vec;

use crate::pauli::{PauliAxis, PauliString};
use crate::{Error, Result};

/// One weighted Pauli string of an observable.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    coeff: f64,
    string: PauliString,
}

impl PauliTerm {
    pub fn new(coeff: f64, string: PauliString) -> Self {
        Self { coeff, string }
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn string(&self) -> &PauliString {
        &self.string
    }

    pub fn support_vec(&self) -> Vec<usize> {
        self.string.support_vec()
    }
}

/// Observable flavors used throughout the experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CostKind {
    GlobalParity,
    LocalZAverage,
    TfimDensity { coupling: f64, field: f64 },
    GlobalCustom,
    LocalCustom,
}

impl CostKind {
    pub fn label(&self) -> &'static str {
        match self {
            CostKind::GlobalParity => "global",
            CostKind::LocalZAverage => "local",
            CostKind::TfimDensity { .. } => "tfim",
            CostKind::GlobalCustom => "global_custom",
            CostKind::LocalCustom => "local_custom",
        }
    }

    pub fn is_termwise_local(&self) -> bool {
        matches!(
            self,
            CostKind::LocalZAverage | CostKind::TfimDensity { .. } | CostKind::LocalCustom
        )
    }
}

/// Measurement basis of a commuting term group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementBasis {
    /// Computational basis; covers Z-only terms.
    Computational,
    /// Hadamard-rotated basis; covers X-only terms.
    XBasis,
}

/// Indices of terms measurable together in one basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementGroup {
    pub basis: MeasurementBasis,
    pub terms: Vec<usize>,
}

/// Hermitian observable as a real-weighted sum of Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    kind: CostKind,
    locality: usize,
    norm_bound: f64,
    groups: Option<Vec<MeasurementGroup>>,
}

impl Observable {
    fn assemble(n_qubits: usize, terms: Vec<PauliTerm>, kind: CostKind) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyObservable);
        }
        let mut locality = 0;
        for term in &terms {
            if let Some(q) = term.string().max_qubit()
                && q >= n_qubits
            {
                return Err(Error::QubitIndex { index: q, n_qubits });
            }
            locality = locality.max(term.string().weight());
            if kind.is_termwise_local() && term.coeff().abs() > 1.0 + 1e-12 {
                return Err(Error::TermNormExceeded {
                    coeff: term.coeff(),
                });
            }
        }
        let norm_bound = terms.iter().map(|t| t.coeff().abs()).sum();
        let groups = build_groups(&terms);
        Ok(Self {
            n_qubits,
            terms,
            kind,
            locality,
            norm_bound,
            groups,
        })
    }

    /// `Z` on every qubit: the full-parity cost.
    pub fn global_parity(n: usize) -> Result<Self> {
        let string = PauliString::z_on(0..n)?;
        Self::assemble(
            n,
            alloc::vec![PauliTerm::new(1.0, string)],
            CostKind::GlobalParity,
        )
    }

    /// `(1/n) sum_i Z_i`: the averaged 1-local cost.
    pub fn local_z_average(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyObservable);
        }
        let coeff = 1.0 / n as f64;
        let terms = (0..n)
            .map(|q| PauliTerm::new(coeff, PauliString::single(q, PauliAxis::Z)))
            .collect();
        Self::assemble(n, terms, CostKind::LocalZAverage)
    }

    /// Periodic transverse-field Ising energy density,
    /// `-(J/(2n)) sum_i Z_i Z_{i+1} - (h/(2n)) sum_i X_i`.
    pub fn tfim_density(n: usize, coupling: f64, field: f64) -> Result<Self> {
        let terms = tfim_terms(n, coupling / (2 * n) as f64, field / (2 * n) as f64)?;
        Self::assemble(n, terms, CostKind::TfimDensity { coupling, field })
    }

    /// The unnormalized Ising Hamiltonian, kept for energy reporting.
    pub fn tfim_hamiltonian(n: usize, coupling: f64, field: f64) -> Result<Self> {
        let terms = tfim_terms(n, coupling, field)?;
        let mut obs = Self::assemble(n, terms, CostKind::GlobalCustom)?;
        obs.locality = 2;
        Ok(obs)
    }

    /// Arbitrary term list treated as a global objective.
    pub fn global_custom(n: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        Self::assemble(n, terms, CostKind::GlobalCustom)
    }

    /// Arbitrary term list treated as term-wise local; every term must have
    /// unit-bounded coefficient.
    pub fn local_custom(n: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        Self::assemble(n, terms, CostKind::LocalCustom)
    }

    /// A single term as its own observable (covariance diagnostics).
    pub fn single_term(n: usize, term: PauliTerm) -> Result<Self> {
        Self::assemble(n, alloc::vec![term], CostKind::LocalCustom)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn kind(&self) -> CostKind {
        self.kind
    }

    /// Max qubits touched by any single term.
    pub fn locality(&self) -> usize {
        self.locality
    }

    /// Triangle-inequality bound on the operator norm (1 for the named kinds).
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn is_termwise_local(&self) -> bool {
        self.kind.is_termwise_local()
    }

    /// Commuting measurement groups, when the terms split into Z-only and
    /// X-only families.
    pub fn measurement_groups(&self) -> Result<&[MeasurementGroup]> {
        self.groups.as_deref().ok_or(Error::UnsupportedMeasurement)
    }
}

fn tfim_terms(n: usize, zz_coeff: f64, x_coeff: f64) -> Result<Vec<PauliTerm>> {
    if n < 3 {
        return Err(Error::ObservableTooSmall { n, min: 3 });
    }
    let mut terms = Vec::with_capacity(2 * n);
    for i in 0..n {
        let string = PauliString::z_on([i, (i + 1) % n])?;
        terms.push(PauliTerm::new(-zz_coeff, string));
    }
    for i in 0..n {
        terms.push(PauliTerm::new(
            -x_coeff,
            PauliString::single(i, PauliAxis::X),
        ));
    }
    Ok(terms)
}

fn build_groups(terms: &[PauliTerm]) -> Option<Vec<MeasurementGroup>> {
    let mut z_terms = Vec::new();
    let mut x_terms = Vec::new();
    for (idx, term) in terms.iter().enumerate() {
        let mut all_z = true;
        let mut all_x = true;
        for (_, axis) in term.string().iter() {
            all_z &= axis == PauliAxis::Z;
            all_x &= axis == PauliAxis::X;
        }
        if all_z {
            z_terms.push(idx);
        } else if all_x {
            x_terms.push(idx);
        } else {
            return None;
        }
    }
    let mut groups = Vec::new();
    if !z_terms.is_empty() {
        groups.push(MeasurementGroup {
            basis: MeasurementBasis::Computational,
            terms: z_terms,
        });
    }
    if !x_terms.is_empty() {
        groups.push(MeasurementGroup {
            basis: MeasurementBasis::XBasis,
            terms: x_terms,
        });
    }
    Some(groups)
}
