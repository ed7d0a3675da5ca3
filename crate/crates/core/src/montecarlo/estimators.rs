use rayon::prelude::*;
use serde::Serialize;

use super::config::{SimConfig, SimMode, SimulableProcess};
use super::skeleton::{path_rng, Stepper};
use super::stats::{empirical_laplace, LaplaceEstimate};
use crate::error::{Error, Result};
use crate::exponent::LevyExponent;
use crate::numerics::{roots::bisect, CompensatedSum};
use crate::scale::{ScaleFunction, ScaleMethod};

// crossing probabilities below e^{-40} are not worth a uniform draw
const BRIDGE_CUTOFF: f64 = 20.0;
const CENSOR_WARNING: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathOutcome {
    /// Hitting time, occupation time, escape indicator or overshoot weight.
    pub value: f64,
    /// Horizon reached before the path was resolved; `value` is then a lower bound.
    pub censored: bool,
    pub terminal_below_a: bool,
}

impl PathOutcome {
    pub fn exact(value: f64) -> Self {
        Self { value, censored: false, terminal_below_a: false }
    }
}

/// Level above `ln a` from which the chance of ever returning below `ln a`
/// is under `tolerance`: `1 - ψ'(0+) W(z) < tolerance`.
pub fn stop_level(exponent: &LevyExponent, tolerance: f64) -> Result<f64> {
    let scale = ScaleFunction::new(exponent.clone(), ScaleMethod::Auto)
        .map_err(|e| Error::Unsupported(format!("paths above the level need a transient exponent: {e}")))?;
    let slope = scale.slope_at_zero();
    let excess = |z: f64| 1.0 - slope * scale.eval(z).unwrap_or(0.0) - tolerance;
    if excess(0.0) < 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while excess(hi) >= 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Inconsistent("return probability does not fall below the tolerance".into()));
        }
    }
    // the probability decreases in z: positive excess on the left
    Ok(bisect(excess, 0.0, hi, false, 1e-9) + 1e-9)
}

struct Context<'a> {
    process: &'a SimulableProcess,
    h: f64,
    alpha: f64,
    z0: f64,
    level_pow: f64,
    clock_limit: f64,
    max_steps: u64,
    var_h: f64,
    bridge: bool,
    stop: f64,
    seed: u64,
    mode: SimMode,
}

impl Context<'_> {
    fn path(&self, index: u64) -> PathOutcome {
        let stepper = Stepper::new(self.process, self.h, path_rng(self.seed, index));
        match self.mode {
            SimMode::Hitting => self.hitting(stepper),
            SimMode::Occupation => self.occupation(stepper),
            SimMode::Ruin => self.passage_below(stepper, None),
            SimMode::Overshoot { u } => self.passage_below(stepper, Some(u)),
        }
    }

    #[inline]
    fn bridge_crosses(&self, stepper: &mut Stepper, d0: f64, d1: f64) -> bool {
        // d0, d1: distances of the cell endpoints to the level, same sign
        if !self.bridge || self.var_h == 0.0 {
            return false;
        }
        let prod = d0 * d1;
        if prod >= BRIDGE_CUTOFF * self.var_h {
            return false;
        }
        stepper.uniform() < (-2.0 * prod / self.var_h).exp()
    }

    fn hitting(&self, mut st: Stepper) -> PathOutcome {
        let h = self.h;
        let mut z = self.z0;
        let mut ez = (self.alpha * z).exp();
        let mut clock = 0.0;
        for _ in 0..self.max_steps {
            let end = z + st.diffusive();
            if end >= 0.0 {
                let frac = -z / (end - z);
                clock += 0.5 * frac * h * (ez + 1.0);
                return PathOutcome { value: clock * self.level_pow, censored: false, terminal_below_a: false };
            }
            if self.bridge_crosses(&mut st, z, end) {
                clock += 0.25 * h * (ez + 1.0);
                return PathOutcome { value: clock * self.level_pow, censored: false, terminal_below_a: false };
            }
            let e_end = (self.alpha * end).exp();
            clock += 0.5 * h * (ez + e_end);
            let j = st.jumps();
            if j == 0.0 {
                z = end;
                ez = e_end;
            } else {
                z = end + j;
                ez = (self.alpha * z).exp();
            }
            if clock >= self.clock_limit {
                break;
            }
        }
        PathOutcome { value: clock * self.level_pow, censored: true, terminal_below_a: true }
    }

    fn occupation(&self, mut st: Stepper) -> PathOutcome {
        let h = self.h;
        let track_clock = self.clock_limit.is_finite();
        let mut z = self.z0;
        let mut ez = (self.alpha * z).exp();
        let mut occ = 0.0;
        let mut clock = 0.0;
        for _ in 0..self.max_steps {
            let end = z + st.diffusive();
            let below = z <= 0.0 || end <= 0.0;
            let e_end = if below || track_clock { (self.alpha * end).exp() } else { 0.0 };
            if z <= 0.0 && end <= 0.0 {
                occ += 0.5 * h * (ez + e_end);
            } else if z <= 0.0 {
                let frac = -z / (end - z);
                occ += 0.5 * frac * h * (ez + 1.0);
            } else if end <= 0.0 {
                let frac = -end / (z - end);
                occ += 0.5 * frac * h * (1.0 + e_end);
            }
            if track_clock {
                clock += 0.5 * h * (ez + e_end);
            }
            let j = st.jumps();
            z = end + j;
            if z >= self.stop {
                return PathOutcome { value: occ * self.level_pow, censored: false, terminal_below_a: false };
            }
            // ez is only read while the path sits below the level or the clock is tracked
            ez = if j == 0.0 {
                e_end
            } else if z <= 0.0 || track_clock {
                (self.alpha * z).exp()
            } else {
                0.0
            };
            if track_clock && clock >= self.clock_limit {
                return PathOutcome { value: occ * self.level_pow, censored: true, terminal_below_a: z <= 0.0 };
            }
        }
        PathOutcome { value: occ * self.level_pow, censored: true, terminal_below_a: z <= 0.0 }
    }

    /// Ruin: 1 if ξ never passes below the level. Overshoot: `exp(u ξ)` at the
    /// passage, 0 without one.
    fn passage_below(&self, mut st: Stepper, overshoot: Option<f64>) -> PathOutcome {
        let h = self.h;
        let track_clock = self.clock_limit.is_finite();
        let passed = |at: f64| {
            let value = match overshoot {
                Some(u) => (u * at).exp(),
                None => 0.0,
            };
            PathOutcome { value, censored: false, terminal_below_a: true }
        };
        let escaped = PathOutcome { value: if overshoot.is_some() { 0.0 } else { 1.0 }, censored: false, terminal_below_a: false };
        let mut z = self.z0;
        let mut clock = 0.0;
        for _ in 0..self.max_steps {
            let end = z + st.diffusive();
            if end <= 0.0 || self.bridge_crosses(&mut st, z, end) {
                return passed(0.0);
            }
            if track_clock {
                clock += 0.5 * h * ((self.alpha * z).exp() + (self.alpha * end).exp());
            }
            z = end + st.jumps();
            if z <= 0.0 {
                return passed(z);
            }
            if z >= self.stop {
                return escaped;
            }
            if track_clock && clock >= self.clock_limit {
                break;
            }
        }
        let mut out = escaped;
        out.censored = true;
        out
    }
}

/// Per-path outcomes of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathEnsemble {
    pub config: SimConfig,
    /// Level above `ln a` at which paths above the level were stopped.
    pub stop_level: Option<f64>,
    pub outcomes: Vec<PathOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub config: SimConfig,
    pub stop_level: Option<f64>,
    pub n_paths: usize,
    pub censored: usize,
    pub censored_fraction: f64,
    pub terminal_below_a: usize,
    pub mean: f64,
    pub stderr: f64,
    pub laplace: Vec<LaplaceEstimate>,
    pub warnings: Vec<String>,
}

impl PathEnsemble {
    pub fn censored(&self) -> usize {
        self.outcomes.iter().filter(|o| o.censored).count()
    }

    /// Values of the resolved paths.
    pub fn uncensored_values(&self) -> Vec<f64> {
        self.outcomes.iter().filter(|o| !o.censored).map(|o| o.value).collect()
    }

    /// Mean and standard error of `value` over all paths.
    pub fn mean_and_stderr(&self) -> (f64, f64) {
        mean_stderr(self.outcomes.iter().map(|o| o.value))
    }

    pub fn summary(&self, q_grid: &[f64]) -> EnsembleSummary {
        let n = self.outcomes.len();
        let censored = self.censored();
        let censored_fraction = censored as f64 / n as f64;
        let (mean, stderr) = self.mean_and_stderr();
        let mut warnings = Vec::new();
        if censored_fraction > CENSOR_WARNING {
            warnings.push(format!("{censored} of {n} paths censored at the horizon"));
        }
        EnsembleSummary {
            config: self.config.clone(),
            stop_level: self.stop_level,
            n_paths: n,
            censored,
            censored_fraction,
            terminal_below_a: self.outcomes.iter().filter(|o| o.terminal_below_a).count(),
            mean,
            stderr,
            laplace: empirical_laplace(&self.outcomes, q_grid),
            warnings,
        }
    }
}

pub(crate) fn mean_stderr<I: Iterator<Item = f64> + Clone>(values: I) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().collect::<CompensatedSum>().value() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss = values.map(|v| (v - mean) * (v - mean)).collect::<CompensatedSum>().value();
    (mean, (ss / (n - 1) as f64 / n as f64).sqrt())
}

/// Runs `cfg` on the global rayon pool.
pub fn run(cfg: &SimConfig) -> Result<PathEnsemble> {
    run_with_workers(cfg, None)
}

/// Runs `cfg` on a dedicated pool of `workers` threads. Outcomes are stored in
/// path order, so the result does not depend on the worker count.
pub fn run_with_workers(cfg: &SimConfig, workers: Option<usize>) -> Result<PathEnsemble> {
    let process = cfg.validate()?;
    let stop = match cfg.mode {
        SimMode::Hitting => None,
        _ => Some(stop_level(&cfg.exponent, cfg.return_tolerance)?),
    };
    let a_log = cfg.a.ln();
    let level_pow = (cfg.alpha * a_log).exp();
    let ctx = Context {
        process: &process,
        h: cfg.h,
        alpha: cfg.alpha,
        z0: cfg.x0.ln() - a_log,
        level_pow,
        clock_limit: cfg.t_max.map_or(f64::INFINITY, |t| t / level_pow),
        max_steps: (cfg.s_max / cfg.h).ceil() as u64,
        var_h: process.sigma2 * cfg.h,
        bridge: cfg.bridge_correction,
        stop: stop.unwrap_or(f64::INFINITY),
        seed: cfg.master_seed,
        mode: cfg.mode,
    };
    let simulate = || (0..cfg.n_paths as u64).into_par_iter().map(|i| ctx.path(i)).collect::<Vec<_>>();
    let outcomes = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?
            .install(simulate),
        None => simulate(),
    };
    Ok(PathEnsemble { config: cfg.clone(), stop_level: stop, outcomes })
}

/// Samples of `T_a` under the exponent of `cfg` from `x0 < a`.
pub fn estimate_hitting(cfg: &SimConfig) -> Result<PathEnsemble> {
    run(&cfg.clone().with_mode(SimMode::Hitting))
}

/// Samples of `∫ 1{X_s <= a} ds`; `cfg.exponent` is the transformed exponent.
pub fn estimate_occupation(cfg: &SimConfig) -> Result<PathEnsemble> {
    run(&cfg.clone().with_mode(SimMode::Occupation))
}

/// Indicators that X started at `x0 >= a` never passes below `a`.
pub fn estimate_ruin(cfg: &SimConfig) -> Result<PathEnsemble> {
    run(&cfg.clone().with_mode(SimMode::Ruin))
}

/// `exp(u ξ)` at the first passage below `ln a`, 0 without one.
pub fn estimate_overshoot(cfg: &SimConfig, u: f64) -> Result<PathEnsemble> {
    run(&cfg.clone().with_mode(SimMode::Overshoot { u }))
}
