//! Sample statistics, bootstrap confidence intervals, distribution tests,
//! and the scaling-law fits used by the sweep experiments.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::linalg::Matrix;
use crate::{Error, Result};

/// Bootstrap resample count used by ensemble confidence intervals.
pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 2000;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased (n-1) sample variance.
pub fn variance_unbiased(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::TooFewPoints {
            have: xs.len(),
            need: 2,
        });
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Ok(ss / (xs.len() - 1) as f64)
}

pub fn std_dev_unbiased(xs: &[f64]) -> Result<f64> {
    Ok(variance_unbiased(xs)?.sqrt())
}

/// Unbiased sample covariance of paired observations.
pub fn covariance_unbiased(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::TooFewPoints {
            have: xs.len().min(ys.len()),
            need: 2,
        });
    }
    let mx = mean(xs);
    let my = mean(ys);
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(ss / (xs.len() - 1) as f64)
}

/// Unbiased covariance matrix of vector-valued observations (rows).
pub fn covariance_matrix(observations: &[Vec<f64>]) -> Result<Matrix> {
    if observations.len() < 2 {
        return Err(Error::TooFewPoints {
            have: observations.len(),
            need: 2,
        });
    }
    let d = observations[0].len();
    let n = observations.len() as f64;
    let mut means = alloc::vec![0.0; d];
    for row in observations {
        assert_eq!(row.len(), d, "observations share a dimension");
        for (m, x) in means.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut sigma = Matrix::zeros(d);
    for row in observations {
        for i in 0..d {
            for j in 0..d {
                let v = sigma.get(i, j) + (row[i] - means[i]) * (row[j] - means[j]);
                sigma.set(i, j, v);
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            let v = sigma.get(i, j) / (n - 1.0);
            sigma.set(i, j, v);
        }
    }
    Ok(sigma)
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Percentile bootstrap interval for the unbiased sample variance.
pub fn bootstrap_variance_ci<R: Rng + ?Sized>(
    values: &[f64],
    n_resamples: usize,
    level: f64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::TooFewPoints {
            have: values.len(),
            need: 2,
        });
    }
    if !(0.0..1.0).contains(&level) || level <= 0.0 {
        return Err(Error::InvalidTolerance {
            name: "bootstrap level",
        });
    }
    let n = values.len();
    let mut stats = Vec::with_capacity(n_resamples);
    let mut resample = alloc::vec![0.0; n];
    for _ in 0..n_resamples {
        for slot in &mut resample {
            *slot = values[rng.random_range(0..n)];
        }
        stats.push(variance_unbiased(&resample)?);
    }
    stats.sort_by(|a, b| a.partial_cmp(b).expect("finite variance"));
    let alpha = (1.0 - level) / 2.0;
    Ok((
        quantile_sorted(&stats, alpha),
        quantile_sorted(&stats, 1.0 - alpha),
    ))
}

/// Kolmogorov-Smirnov statistic and asymptotic p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// Kolmogorov survival function `Q(x) = 2 sum_k (-1)^{k-1} exp(-2 k^2 x^2)`.
fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64) * (k as f64) * x * x).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let sqrt_n = n_eff.sqrt();
    kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * d)
}

/// Two-sample KS test that `a` and `b` come from the same distribution.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::TooFewPoints {
            have: a.len().min(b.len()),
            need: 1,
        });
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
    sb.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
    let (na, nb) = (sa.len(), sb.len());
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while ia < na && ib < nb {
        let xa = sa[ia];
        let xb = sb[ib];
        if xa <= xb {
            ia += 1;
        }
        if xb <= xa {
            ib += 1;
        }
        let fa = ia as f64 / na as f64;
        let fb = ib as f64 / nb as f64;
        d = d.max((fa - fb).abs());
    }
    let n_eff = (na * nb) as f64 / (na + nb) as f64;
    Ok(KsTest {
        statistic: d,
        p_value: ks_p_value(d, n_eff),
    })
}

/// One-sample KS test against the uniform distribution on `[0, 1)`.
pub fn ks_uniform01(xs: &[f64]) -> Result<KsTest> {
    if xs.is_empty() {
        return Err(Error::TooFewPoints { have: 0, need: 1 });
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = x.clamp(0.0, 1.0);
        let above = (i + 1) as f64 / n - cdf;
        let below = cdf - i as f64 / n;
        d = d.max(above.max(below));
    }
    Ok(KsTest {
        statistic: d,
        p_value: ks_p_value(d, n),
    })
}

/// Scaling-law families fit by the sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FitModel {
    /// `y = c * exp(-rate * x)`, fit log-linearly.
    ExpInN,
    /// `y = c * x^(-exponent)`, fit in log-log form.
    PowerInN,
    /// `y = floor + shot_coeff / x` with nonnegative parameters.
    TwoTermInShots,
}

impl FitModel {
    pub fn label(&self) -> &'static str {
        match self {
            FitModel::ExpInN => "exp",
            FitModel::PowerInN => "power",
            FitModel::TwoTermInShots => "two_term",
        }
    }
}

/// Fitted parameters, by model.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FitParams {
    Exp { prefactor: f64, rate: f64 },
    Power { prefactor: f64, exponent: f64 },
    TwoTerm { floor: f64, shot_coeff: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitResult {
    pub model: FitModel,
    pub params: FitParams,
    pub r_squared: f64,
}

impl FitResult {
    pub fn two_term(&self) -> Result<(f64, f64)> {
        match self.params {
            FitParams::TwoTerm { floor, shot_coeff } => Ok((floor, shot_coeff)),
            _ => Err(Error::WrongFitModel {
                expected: "two-term",
            }),
        }
    }
}

/// Ordinary least squares on `(x, y)`; returns slope, intercept, r-squared.
fn linear_regression(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let fit = slope * x + intercept;
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - my) * (y - my);
    }
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res.abs() < 1e-24 * n {
        1.0
    } else {
        0.0
    };
    (slope, intercept, r2)
}

fn r_squared_direct(points: &[(f64, f64)], predict: impl Fn(f64) -> f64) -> f64 {
    let my = mean(&points.iter().map(|p| p.1).collect::<Vec<_>>());
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for &(x, y) in points {
        ss_res += (y - predict(x)) * (y - predict(x));
        ss_tot += (y - my) * (y - my);
    }
    if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Least-squares fit of a decay law to `(x, value)` points.
///
/// Exponential and power laws are fit on the stated log transforms; the
/// two-term shot model is fit directly with its parameters clamped
/// nonnegative (boundary solution with the smaller residual).
pub fn fit_scaling(points: &[(f64, f64)], model: FitModel) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            have: points.len(),
            need: 3,
        });
    }
    match model {
        FitModel::ExpInN => {
            let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = points
                .iter()
                .map(|p| {
                    if p.1 > 0.0 {
                        Ok(p.1.ln())
                    } else {
                        Err(Error::NonpositiveVariance)
                    }
                })
                .collect::<Result<_>>()?;
            let (slope, intercept, r2) = linear_regression(&xs, &ys);
            Ok(FitResult {
                model,
                params: FitParams::Exp {
                    prefactor: intercept.exp(),
                    rate: -slope,
                },
                r_squared: r2,
            })
        }
        FitModel::PowerInN => {
            let xs: Vec<f64> = points
                .iter()
                .map(|p| {
                    if p.0 > 0.0 {
                        Ok(p.0.ln())
                    } else {
                        Err(Error::NonpositiveVariance)
                    }
                })
                .collect::<Result<_>>()?;
            let ys: Vec<f64> = points
                .iter()
                .map(|p| {
                    if p.1 > 0.0 {
                        Ok(p.1.ln())
                    } else {
                        Err(Error::NonpositiveVariance)
                    }
                })
                .collect::<Result<_>>()?;
            let (slope, intercept, r2) = linear_regression(&xs, &ys);
            Ok(FitResult {
                model,
                params: FitParams::Power {
                    prefactor: intercept.exp(),
                    exponent: -slope,
                },
                r_squared: r2,
            })
        }
        FitModel::TwoTermInShots => {
            let (floor, shot_coeff) = fit_two_term_nonnegative(points);
            let r2 = r_squared_direct(points, |x| floor + shot_coeff / x);
            Ok(FitResult {
                model,
                params: FitParams::TwoTerm { floor, shot_coeff },
                r_squared: r2,
            })
        }
    }
}

/// Nonnegative least squares for `y = a + b u` with `u = 1/x`: try the
/// unconstrained solution, otherwise the better of the two boundary fits.
fn fit_two_term_nonnegative(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let us: Vec<f64> = points.iter().map(|p| 1.0 / p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let su: f64 = us.iter().sum();
    let suu: f64 = us.iter().map(|u| u * u).sum();
    let sy: f64 = ys.iter().sum();
    let suy: f64 = us.iter().zip(&ys).map(|(u, y)| u * y).sum();
    let det = n * suu - su * su;
    if det.abs() > 1e-300 {
        let b = (n * suy - su * sy) / det;
        let a = (sy - b * su) / n;
        if a >= 0.0 && b >= 0.0 {
            return (a, b);
        }
    }
    // boundary candidates
    let a_only = (mean(&ys).max(0.0), 0.0);
    let b_only = (0.0, if suu > 0.0 { (suy / suu).max(0.0) } else { 0.0 });
    let sse = |a: f64, b: f64| -> f64 {
        us.iter()
            .zip(&ys)
            .map(|(u, y)| (y - a - b * u) * (y - a - b * u))
            .sum()
    };
    if sse(a_only.0, a_only.1) <= sse(b_only.0, b_only.1) {
        a_only
    } else {
        b_only
    }
}
