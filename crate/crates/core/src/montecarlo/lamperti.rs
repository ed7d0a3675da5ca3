use serde::Serialize;

use super::skeleton::Skeleton;
use crate::error::{invalid, Result};

/// X in self-similar time: `ln X_t = ln x0 + ξ(A_t)`, where `A` inverts the
/// clock `∫₀ˢ exp(α (ln x0 + ξ_u)) du`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LampertiPath {
    pub h: f64,
    pub x0: f64,
    pub alpha: f64,
    /// Clock value at each grid point of the skeleton.
    pub clock: Vec<f64>,
    /// `ln x0 + ξ` at each grid point.
    pub log_levels: Vec<f64>,
    /// `ln x0 + ξ` at each cell end before jumps.
    pub log_pre_jump: Vec<f64>,
}

impl LampertiPath {
    /// Self-similar time covered by the skeleton.
    pub fn horizon(&self) -> f64 {
        *self.clock.last().unwrap_or(&0.0)
    }

    /// `X_t`, or `None` once `t` lies past the horizon.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        if !(t >= 0.0) || t > self.horizon() {
            return None;
        }
        let k = match self.clock.partition_point(|&c| c <= t) {
            0 => 0,
            p => (p - 1).min(self.log_pre_jump.len().saturating_sub(1)),
        };
        if self.log_pre_jump.is_empty() {
            return Some(self.log_levels[0].exp());
        }
        let span = self.clock[k + 1] - self.clock[k];
        let frac = if span > 0.0 { ((t - self.clock[k]) / span).clamp(0.0, 1.0) } else { 0.0 };
        let (start, end) = (self.log_levels[k], self.log_pre_jump[k]);
        Some((start + frac * (end - start)).exp())
    }
}

pub fn lamperti_transform(skeleton: &Skeleton, alpha: f64, x0: f64) -> Result<LampertiPath> {
    if !(x0 > 0.0) || !x0.is_finite() {
        return Err(invalid(format!("x0 must be positive, got {x0}")));
    }
    if !(alpha > 0.0) {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    let shift = x0.ln();
    let log_levels: Vec<f64> = skeleton.values.iter().map(|v| v + shift).collect();
    let log_pre_jump: Vec<f64> = skeleton.pre_jump.iter().map(|v| v + shift).collect();
    let mut clock = Vec::with_capacity(log_levels.len());
    let mut acc = 0.0;
    clock.push(acc);
    for k in 0..log_pre_jump.len() {
        acc += 0.5 * skeleton.h * ((alpha * log_levels[k]).exp() + (alpha * log_pre_jump[k]).exp());
        clock.push(acc);
    }
    Ok(LampertiPath { h: skeleton.h, x0, alpha, clock, log_levels, log_pre_jump })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(h: f64, steps: usize, slope: f64) -> Skeleton {
        let values: Vec<f64> = (0..=steps).map(|k| slope * h * k as f64).collect();
        let pre_jump = values[1..].to_vec();
        Skeleton { h, values, pre_jump, jump_count: 0 }
    }

    #[test]
    fn deterministic_line() {
        // ξ_t = t, α = 1, x0 = 1: the clock is e^s - 1 and X_t = 1 + t
        let h = 1e-3;
        let path = lamperti_transform(&line(h, 3000, 1.0), 1.0, 1.0).unwrap();
        for t in [0.0, 0.5, 3.0, 10.0] {
            let x = path.value_at(t).unwrap();
            assert!((x - (1.0 + t)).abs() < 2.0 * h * h * (1.0 + t), "t = {t}: {x}");
        }
        assert!(path.value_at(path.horizon() + 1.0).is_none());
    }

    #[test]
    fn constant_path() {
        let path = lamperti_transform(&line(0.01, 100, 0.0), 1.7, 1.0).unwrap();
        for t in [0.0, 0.3, 0.99] {
            assert_eq!(path.value_at(t).unwrap(), 1.0);
        }
    }

    #[test]
    fn self_similar_scaling() {
        let sk = line(1e-3, 2000, 1.0);
        let (alpha, c) = (2.0, 3.0);
        let base = lamperti_transform(&sk, alpha, 0.5).unwrap();
        let scaled = lamperti_transform(&sk, alpha, 0.5 * c).unwrap();
        for t in [0.01, 0.1, 0.4] {
            let lhs = scaled.value_at(c.powf(alpha) * t).unwrap();
            let rhs = c * base.value_at(t).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * rhs, "{lhs} vs {rhs}");
        }
    }
}
