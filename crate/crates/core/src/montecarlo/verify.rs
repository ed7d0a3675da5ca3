use serde::Serialize;

use super::config::{SimConfig, SimMode, DEFAULT_RETURN_TOLERANCE};
use super::estimators::{run_with_workers, EnsembleSummary, PathEnsemble};
use super::stats::{ks_two_sample, KsResult};
use crate::error::{invalid, Result};
use crate::exponent::LevyExponent;
use crate::numerics::pow_nonneg;
use crate::series::SeriesEvaluator;

const KS_LEVEL: f64 = 0.01;

/// Derived seed for the `k`-th auxiliary ensemble of a run (splitmix64 step).
pub fn derived_seed(master: u64, k: u64) -> u64 {
    let mut z = master.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Monte Carlo comparison of `T_a` under `ψ` with the occupation time of
/// `[0, a]` under `T_α ψ`, both started from `x0` near 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McVerifyOptions {
    pub exponent: LevyExponent,
    pub alpha: f64,
    pub a: f64,
    pub x0: f64,
    pub q_grid: Vec<f64>,
    pub n_paths: usize,
    pub h: f64,
    pub seed: u64,
    /// Extra KS attempts on fresh seeds after a failure.
    pub ks_retries: usize,
    pub return_tolerance: f64,
    /// Rerun the hitting ensemble from `2 x0` and report the change.
    pub entrance_probe: bool,
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl McVerifyOptions {
    pub fn new(exponent: LevyExponent, alpha: f64, a: f64) -> Self {
        Self {
            exponent,
            alpha,
            a,
            x0: 1e-3 * a,
            q_grid: vec![0.5, 1.0, 2.0],
            n_paths: 100_000,
            h: 5e-4,
            seed: 42,
            ks_retries: 3,
            return_tolerance: DEFAULT_RETURN_TOLERANCE,
            entrance_probe: false,
            workers: None,
        }
    }

    fn config(&self, exponent: LevyExponent, mode: SimMode, x0: f64, seed: u64) -> SimConfig {
        let mut cfg = SimConfig::new(exponent, self.alpha, x0, self.a, self.h, self.n_paths, seed).with_mode(mode);
        cfg.return_tolerance = self.return_tolerance;
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McCriterion {
    pub name: String,
    pub q: Option<f64>,
    pub estimate: f64,
    pub target: f64,
    pub stderr: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntranceProbe {
    pub x0: f64,
    pub q: f64,
    pub estimate: f64,
    pub shift_in_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub options: McVerifyOptions,
    /// `1/I(q a^α)` per q.
    pub targets: Vec<f64>,
    pub hitting: EnsembleSummary,
    pub occupation: EnsembleSummary,
    pub criteria: Vec<McCriterion>,
    pub ks_attempts: Vec<KsResult>,
    pub entrance_probe: Vec<EntranceProbe>,
    pub pass: bool,
}

fn ks_between(hit: &PathEnsemble, occ: &PathEnsemble) -> Result<KsResult> {
    ks_two_sample(&hit.uncensored_values(), &occ.uncensored_values())
}

pub fn verify_mc(opts: &McVerifyOptions) -> Result<McReport> {
    if opts.q_grid.iter().any(|q| !(*q >= 0.0 && q.is_finite())) {
        return Err(invalid("q values must be finite and >= 0"));
    }
    let series = SeriesEvaluator::new(opts.exponent.clone(), opts.alpha)?;
    let a_pow = pow_nonneg(opts.a, opts.alpha);
    let targets = opts
        .q_grid
        .iter()
        .map(|&q| series.value(q * a_pow).map(|i| 1.0 / i))
        .collect::<Result<Vec<_>>>()?;
    let tee = opts.exponent.tee_transform(opts.alpha)?.simplify();

    let run_pair = |hit_seed: u64, occ_seed: u64| -> Result<(PathEnsemble, PathEnsemble)> {
        let hit = run_with_workers(&opts.config(opts.exponent.clone(), SimMode::Hitting, opts.x0, hit_seed), opts.workers)?;
        let occ = run_with_workers(&opts.config(tee.clone(), SimMode::Occupation, opts.x0, occ_seed), opts.workers)?;
        Ok((hit, occ))
    };
    let (hit, occ) = run_pair(opts.seed, derived_seed(opts.seed, 0))?;
    let hitting = hit.summary(&opts.q_grid);
    let occupation = occ.summary(&opts.q_grid);

    let allowance = 2.0 * opts.h;
    let mut criteria = Vec::new();
    for (label, summary) in [("hitting_laplace", &hitting), ("occupation_laplace", &occupation)] {
        for (est, &target) in summary.laplace.iter().zip(&targets) {
            let tolerance = 3.0 * est.stderr + allowance;
            let pass = (est.mean - target).abs() <= tolerance && (est.upper - est.lower) <= tolerance;
            criteria.push(McCriterion {
                name: label.to_string(),
                q: Some(est.q),
                estimate: est.mean,
                target,
                stderr: est.stderr,
                tolerance,
                pass,
            });
        }
    }

    let mut ks_attempts = vec![ks_between(&hit, &occ)?];
    let mut attempt = 0;
    while ks_attempts.last().is_some_and(|k| k.p_value <= KS_LEVEL) && attempt < opts.ks_retries {
        attempt += 1;
        let base = 2 * attempt as u64;
        let (h2, o2) = run_pair(derived_seed(opts.seed, base), derived_seed(opts.seed, base + 1))?;
        ks_attempts.push(ks_between(&h2, &o2)?);
    }
    let ks = ks_attempts.last().expect("at least one attempt");
    criteria.push(McCriterion {
        name: "ks_two_sample".into(),
        q: None,
        estimate: ks.p_value,
        target: KS_LEVEL,
        stderr: 0.0,
        tolerance: 0.0,
        pass: ks.p_value > KS_LEVEL,
    });

    let mut entrance_probe = Vec::new();
    if opts.entrance_probe {
        let doubled = run_with_workers(&opts.config(opts.exponent.clone(), SimMode::Hitting, 2.0 * opts.x0, opts.seed), opts.workers)?
            .summary(&opts.q_grid);
        for (d, base) in doubled.laplace.iter().zip(&hitting.laplace) {
            entrance_probe.push(EntranceProbe {
                x0: 2.0 * opts.x0,
                q: d.q,
                estimate: d.mean,
                shift_in_stderr: (d.mean - base.mean).abs() / base.stderr.max(f64::MIN_POSITIVE),
            });
        }
    }

    let pass = criteria.iter().all(|c| c.pass);
    Ok(McReport { options: opts.clone(), targets, hitting, occupation, criteria, ks_attempts, entrance_probe, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;

    #[test]
    fn small_run_is_reproducible() {
        let mut opts = McVerifyOptions::new(Preset::Bessel { nu: 3.0 }.exponent().unwrap(), 2.0, 1.0);
        opts.n_paths = 400;
        opts.h = 2e-3;
        opts.ks_retries = 0;
        let a = verify_mc(&opts).unwrap();
        opts.workers = Some(2);
        let b = verify_mc(&opts).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.criteria.len(), 7);
        assert!((a.targets[1] - 2f64.sqrt() / 2f64.sqrt().sinh()).abs() < 1e-14);
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let seeds: std::collections::BTreeSet<u64> = (0..100).map(|k| derived_seed(42, k)).collect();
        assert_eq!(seeds.len(), 100);
        assert!(!seeds.contains(&42));
    }
}
