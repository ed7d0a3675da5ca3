use serde::Serialize;

use super::estimators::{mean_stderr, PathOutcome};
use crate::error::{invalid, Result};

/// Smallest sample the two-sample KS test accepts.
pub const MIN_KS_SAMPLE: usize = 100;

/// Empirical `E[exp(-q S)]`. Censored samples are known only from below, so
/// they contribute `exp(-q S)` to `upper` and 0 to `lower`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplaceEstimate {
    pub q: f64,
    pub mean: f64,
    pub stderr: f64,
    pub lower: f64,
    pub upper: f64,
    pub n: usize,
    pub censored: usize,
}

pub fn empirical_laplace(samples: &[PathOutcome], q_grid: &[f64]) -> Vec<LaplaceEstimate> {
    let n = samples.len();
    let censored = samples.iter().filter(|s| s.censored).count();
    q_grid
        .iter()
        .map(|&q| {
            let weights = samples.iter().map(move |s| (-q * s.value).exp());
            let (mean, stderr) = mean_stderr(weights.clone());
            let lost: f64 = samples.iter().filter(|s| s.censored).map(|s| (-q * s.value).exp()).sum();
            let lower = if n == 0 { f64::NAN } else { mean - lost / n as f64 };
            LaplaceEstimate { q, mean, stderr, lower, upper: mean, n, censored }
        })
        .collect()
}

/// Same as [`empirical_laplace`] for fully observed samples.
pub fn empirical_laplace_values(samples: &[f64], q_grid: &[f64]) -> Vec<LaplaceEstimate> {
    let outcomes: Vec<PathOutcome> = samples.iter().map(|&v| PathOutcome::exact(v)).collect();
    empirical_laplace(&outcomes, q_grid)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n_a: usize,
    pub n_b: usize,
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.len() < MIN_KS_SAMPLE || b.len() < MIN_KS_SAMPLE {
        return Err(invalid(format!(
            "KS test needs at least {MIN_KS_SAMPLE} samples per side, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(invalid("KS samples contain NaN"));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let en = (na * nb / (na + nb)).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * d;
    Ok(KsResult { statistic: d, p_value: kolmogorov_q(lambda), n_a: xs.len(), n_b: ys.len() })
}

/// `Q(λ) = 2 Σ (-1)^{k-1} exp(-2 k² λ²)`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let a2 = -2.0 * lambda * lambda;
    let mut sum = 0.0;
    let mut sign = 2.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = sign * (a2 * kf * kf).exp();
        sum += term;
        if term.abs() <= 1e-16 * sum.abs() {
            return sum.clamp(0.0, 1.0);
        }
        sign = -sign;
    }
    1.0
}
