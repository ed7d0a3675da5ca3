use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponent::LevyExponent;

pub const DEFAULT_RETURN_TOLERANCE: f64 = 1e-4;
const DEFAULT_S_MAX: f64 = 500.0;

/// What each path records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimMode {
    /// First time X reaches `a` from `x0 < a`.
    #[default]
    Hitting,
    /// Total time X spends in `[0, a]`.
    Occupation,
    /// Whether X started at `x0 >= a` never passes below `a`.
    Ruin,
    /// `exp(u ξ)` at the first passage of ξ below `ln a`, 0 if there is none.
    Overshoot { u: f64 },
}

fn default_s_max() -> f64 {
    DEFAULT_S_MAX
}

fn default_true() -> bool {
    true
}

fn default_return_tolerance() -> f64 {
    DEFAULT_RETURN_TOLERANCE
}

/// Monte Carlo run description; read from and written to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Exponent of the simulated Lévy process (quadratic and exponential jumps only).
    pub exponent: LevyExponent,
    pub alpha: f64,
    pub x0: f64,
    pub a: f64,
    /// Lévy-time step.
    pub h: f64,
    /// Lévy-time horizon.
    #[serde(default = "default_s_max")]
    pub s_max: f64,
    /// Self-similar-time horizon; unlimited when absent.
    #[serde(default)]
    pub t_max: Option<f64>,
    pub n_paths: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub mode: SimMode,
    /// Brownian-bridge test for level crossings inside a step.
    #[serde(default = "default_true")]
    pub bridge_correction: bool,
    /// Paths above the level stop once the chance of coming back is below this.
    #[serde(default = "default_return_tolerance")]
    pub return_tolerance: f64,
}

impl SimConfig {
    pub fn new(exponent: LevyExponent, alpha: f64, x0: f64, a: f64, h: f64, n_paths: usize, master_seed: u64) -> Self {
        Self {
            exponent,
            alpha,
            x0,
            a,
            h,
            s_max: DEFAULT_S_MAX,
            t_max: None,
            n_paths,
            master_seed,
            mode: SimMode::Hitting,
            bridge_correction: true,
            return_tolerance: DEFAULT_RETURN_TOLERANCE,
        }
    }

    pub fn with_mode(mut self, mode: SimMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<SimulableProcess> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("alpha", self.alpha)?;
        positive("x0", self.x0)?;
        positive("a", self.a)?;
        positive("h", self.h)?;
        positive("s_max", self.s_max)?;
        if let Some(t) = self.t_max {
            positive("t_max", t)?;
        }
        if self.n_paths == 0 {
            return Err(invalid("n_paths must be at least 1"));
        }
        if !(self.return_tolerance > 0.0 && self.return_tolerance < 1.0) {
            return Err(invalid(format!("return_tolerance must lie in (0, 1), got {}", self.return_tolerance)));
        }
        match self.mode {
            SimMode::Hitting if self.x0 >= self.a => {
                return Err(invalid(format!("hitting runs need x0 < a, got x0 = {}, a = {}", self.x0, self.a)))
            }
            SimMode::Ruin | SimMode::Overshoot { .. } if self.x0 < self.a => {
                return Err(invalid(format!("passage-below runs need x0 >= a, got x0 = {}, a = {}", self.x0, self.a)))
            }
            SimMode::Overshoot { u } if !(u >= 0.0 && u.is_finite()) => {
                return Err(invalid(format!("overshoot argument must be >= 0, got {u}")))
            }
            _ => {}
        }
        SimulableProcess::from_exponent(&self.exponent)
    }
}

/// Gaussian part plus finitely many exponential jump families.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulableProcess {
    pub sigma2: f64,
    pub drift: f64,
    pub jump_rate: f64,
    /// (cumulative probability, rate of the exponential size)
    pub jumps: Vec<(f64, f64)>,
}

impl SimulableProcess {
    pub fn from_exponent(e: &LevyExponent) -> Result<Self> {
        let form = e
            .canonical()
            .ok_or_else(|| Error::Unsupported("only quadratic and exponential-jump exponents can be simulated".into()))?;
        if form.killing != 0.0 {
            return Err(Error::Unsupported("killed exponents are not simulated".into()));
        }
        let jump_rate = form.jump_rate();
        let mut acc = 0.0;
        let jumps = form
            .jumps
            .iter()
            .map(|j| {
                acc += j.rate / jump_rate;
                (acc, j.jump_scale)
            })
            .collect();
        Ok(Self { sigma2: form.sigma2, drift: form.drift, jump_rate, jumps })
    }

    /// `E[ξ_1] = drift - Σ λ/ρ`.
    pub fn mean(&self) -> f64 {
        let mut prev = 0.0;
        let mut m = self.drift;
        for &(cum, rho) in &self.jumps {
            m -= (cum - prev) * self.jump_rate / rho;
            prev = cum;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;

    #[test]
    fn json_defaults() {
        let text = r#"{"exponent":{"components":[{"kind":"quadratic","sigma2":1.0,"drift":0.5}]},
            "alpha":2.0,"x0":0.001,"a":1.0,"h":0.0005,"n_paths":10,"master_seed":42}"#;
        let cfg: SimConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.mode, SimMode::Hitting);
        assert!(cfg.bridge_correction);
        assert_eq!(cfg.t_max, None);
        let p = cfg.validate().unwrap();
        assert_eq!(p.mean(), 0.5);
    }

    #[test]
    fn rejects_unsimulable() {
        let e = Preset::Stable { alpha: 1.5 }.exponent().unwrap();
        assert!(SimConfig::new(e, 1.5, 0.1, 1.0, 1e-3, 10, 1).validate().is_err());
        let killed = Preset::KilledBessel { nu: 3.0, kappa: 1.0 }.exponent().unwrap();
        assert!(SimConfig::new(killed.clone(), 2.0, 0.1, 1.0, 1e-3, 10, 1).validate().is_err());
        // its T_2 transform is simulable: the killing becomes exponential jumps
        let p = SimulableProcess::from_exponent(&killed.tee_transform(2.0).unwrap()).unwrap();
        assert_eq!(p.jump_rate, 1.0);
        assert_eq!(p.jumps, vec![(1.0, 2.0)]);
    }

    #[test]
    fn mode_constraints() {
        let e = Preset::Bessel { nu: 3.0 }.exponent().unwrap();
        assert!(SimConfig::new(e.clone(), 2.0, 2.0, 1.0, 1e-3, 10, 1).validate().is_err());
        assert!(SimConfig::new(e, 2.0, 0.5, 1.0, 1e-3, 10, 1).with_mode(SimMode::Ruin).validate().is_err());
    }
}
