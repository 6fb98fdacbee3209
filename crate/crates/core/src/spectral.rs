//! Hessian eigenvalue diagnostics: RMS scale and near-zero fraction.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::ansatz::{Circuit, ParamPoint};
use crate::derivatives::{CostEvaluator, DEFAULT_HESSIAN_CAP};
use crate::linalg::{Matrix, symmetric_eigenvalues};
use crate::observables::Observable;
use crate::{Error, Result};

/// Eigenvalue summary of one or more Hessians.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralSummary {
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// `sqrt(mean(lambda^2))`.
    pub lambda_rms: f64,
    /// Fraction with `|lambda| < epsilon`.
    pub deg_eps: f64,
    pub epsilon: f64,
}

impl SpectralSummary {
    /// Summarize a set of eigenvalues (possibly pooled across seeds).
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, epsilon: f64) -> Self {
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        let m = eigenvalues.len().max(1) as f64;
        let lambda_rms = (eigenvalues.iter().map(|l| l * l).sum::<f64>() / m).sqrt();
        let near_zero = eigenvalues.iter().filter(|l| l.abs() < epsilon).count();
        let deg_eps = near_zero as f64 / m;
        Self {
            eigenvalues,
            lambda_rms,
            deg_eps,
            epsilon,
        }
    }
}

/// Assemble the exact Hessian at `theta` and summarize its spectrum.
///
/// The eigenvalue sum of squares is checked against the squared Frobenius
/// norm of the assembled matrix as an eigensolver consistency guard.
pub fn hessian_spectrum(
    circuit: &Circuit,
    obs: &Observable,
    theta: &ParamPoint,
    epsilon: f64,
    cap: usize,
) -> Result<SpectralSummary> {
    let h = CostEvaluator::for_circuit(circuit)?.full_hessian(circuit, obs, theta, cap)?;
    let summary = matrix_spectrum(&h, epsilon)?;
    Ok(summary)
}

/// Spectrum summary of an already-assembled symmetric matrix.
pub fn matrix_spectrum(h: &Matrix, epsilon: f64) -> Result<SpectralSummary> {
    let eigenvalues = symmetric_eigenvalues(h)?;
    let sum_sq: f64 = eigenvalues.iter().map(|l| l * l).sum();
    let frob = h.frobenius_norm_sqr();
    if (sum_sq - frob).abs() > 1e-8 * frob.max(1.0) {
        return Err(Error::Eigensolver);
    }
    Ok(SpectralSummary::from_eigenvalues(eigenvalues, epsilon))
}

/// Convenience: spectrum with the default Hessian cap.
pub fn hessian_spectrum_default(
    circuit: &Circuit,
    obs: &Observable,
    theta: &ParamPoint,
    epsilon: f64,
) -> Result<SpectralSummary> {
    hessian_spectrum(circuit, obs, theta, epsilon, DEFAULT_HESSIAN_CAP)
}
