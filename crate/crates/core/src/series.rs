//! The entire function `I(z) = Σ a_n zⁿ` with `1/a_n = ψ(α)ψ(2α)…ψ(nα)`, and
//! the hitting-time transforms built from it.

use std::sync::RwLock;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exponent::LevyExponent;
use crate::numerics::{pow_nonneg, CompensatedSum};

pub const DEFAULT_TOLERANCE: f64 = 1e-14;
pub const MAX_TERMS: usize = 100_000;
const MEMO_CHUNK: usize = 64;

/// Result of a certified series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// Memoized evaluator of `I_{ψ,α}`.
#[derive(Debug)]
pub struct SeriesEvaluator {
    exponent: LevyExponent,
    alpha: f64,
    theta: f64,
    tol: f64,
    // psi_at[k] = ψ(α (k+1))
    psi_at: RwLock<Vec<f64>>,
}

impl Clone for SeriesEvaluator {
    fn clone(&self) -> Self {
        Self {
            exponent: self.exponent.clone(),
            alpha: self.alpha,
            theta: self.theta,
            tol: self.tol,
            psi_at: RwLock::new(self.psi_at.read().map(|v| v.clone()).unwrap_or_default()),
        }
    }
}

impl SeriesEvaluator {
    pub fn new(exponent: LevyExponent, alpha: f64) -> Result<Self> {
        Self::with_tolerance(exponent, alpha, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(exponent: LevyExponent, alpha: f64, tol: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(invalid(format!("index alpha must be positive, got {alpha}")));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(invalid(format!("series tolerance must lie in (0, 1), got {tol}")));
        }
        let theta = exponent.largest_root()?;
        if theta >= alpha {
            return Err(Error::RootNotBelowAlpha { theta, alpha });
        }
        Ok(Self { exponent, alpha, theta, tol, psi_at: RwLock::new(Vec::new()) })
    }

    pub fn exponent(&self) -> &LevyExponent {
        &self.exponent
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Largest root of ψ, found at construction.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn ensure(&self, len: usize) -> Result<()> {
        if self.psi_at.read().map_err(poisoned)?.len() >= len {
            return Ok(());
        }
        let mut memo = self.psi_at.write().map_err(poisoned)?;
        let target = len.max(memo.len() + MEMO_CHUNK);
        let mut fresh = Vec::with_capacity(target - memo.len());
        for k in memo.len()..target {
            let v = self.exponent.evaluate(self.alpha * (k + 1) as f64)?;
            if !(v > 0.0) {
                return Err(Error::Inconsistent(format!("ψ({}) = {v} is not positive", self.alpha * (k + 1) as f64)));
            }
            fresh.push(v);
        }
        // extend only after every value is computed, so readers never see a partial state
        memo.extend(fresh);
        Ok(())
    }

    /// `a_0, …, a_n`.
    pub fn coefficients(&self, n: usize) -> Result<Vec<f64>> {
        self.ensure(n)?;
        let memo = self.psi_at.read().map_err(poisoned)?;
        let mut out = Vec::with_capacity(n + 1);
        let mut a = 1.0;
        out.push(a);
        for &p in memo.iter().take(n) {
            a /= p;
            out.push(a);
        }
        Ok(out)
    }

    /// `I(z)` with a rigorous bound on the neglected tail.
    pub fn eval(&self, z: f64) -> Result<SeriesValue> {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(invalid(format!("series argument must be finite and >= 0, got {z}")));
        }
        if z == 0.0 {
            return Ok(SeriesValue { value: 1.0, terms_used: 1, tail_bound: 0.0 });
        }
        let mut sum = CompensatedSum::new();
        sum.add(1.0);
        let mut term = 1.0f64;
        let mut n = 0usize;
        let mut small_run = 0;
        let mut want = MEMO_CHUNK;
        loop {
            self.ensure(want)?;
            let memo = self.psi_at.read().map_err(poisoned)?;
            while n + 1 < memo.len() {
                let next = term * z / memo[n];
                n += 1;
                sum.add(next);
                let total = sum.value();
                if !total.is_finite() {
                    return Err(Error::Overflow(z));
                }
                if next < self.tol * total && next < term {
                    small_run += 1;
                } else {
                    small_run = 0;
                }
                term = next;
                if small_run >= 2 {
                    let ratio = z / memo[n];
                    if ratio < 0.5 {
                        return Ok(SeriesValue {
                            value: total,
                            terms_used: n + 1,
                            tail_bound: term * ratio / (1.0 - ratio),
                        });
                    }
                }
                if n >= MAX_TERMS {
                    return Err(Error::NonConvergent { z, terms: n });
                }
            }
            drop(memo);
            want *= 2;
        }
    }

    pub fn value(&self, z: f64) -> Result<f64> {
        self.eval(z).map(|v| v.value)
    }

    /// `E_x[exp(-q T_a)] = I(q xᵅ)/I(q aᵅ)` for `0 <= x <= a`.
    pub fn hitting_laplace(&self, x: f64, a: f64, q: f64) -> Result<f64> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("level a must be positive, got {a}")));
        }
        if !(x >= 0.0) {
            return Err(invalid(format!("start x must be >= 0, got {x}")));
        }
        if x > a {
            return Err(invalid(format!("start x = {x} lies above the level a = {a}; only upward passage is continuous")));
        }
        if !(q >= 0.0) || !q.is_finite() {
            return Err(invalid(format!("q must be finite and >= 0, got {q}")));
        }
        let qa = q * pow_nonneg(a, self.alpha);
        let qx = qa * pow_nonneg(x / a, self.alpha);
        let den = self.value(qa)?;
        let num = self.value(qx)?;
        Ok(num / den)
    }
}

fn poisoned<T>(_: T) -> Error {
    Error::Inconsistent("series memo lock poisoned".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;

    fn half_square() -> SeriesEvaluator {
        SeriesEvaluator::new(LevyExponent::quadratic(1.0, 0.0).unwrap(), 2.0).unwrap()
    }

    #[test]
    fn coefficients_of_half_square() {
        let c = half_square().coefficients(4).unwrap();
        // 1/(2ⁿ (n!)²)
        assert_eq!(c, vec![1.0, 0.5, 1.0 / 16.0, 1.0 / 288.0, 1.0 / 9216.0]);
    }

    #[test]
    fn value_is_bessel_i0() {
        // I_0(2) from its own series
        let mut i0 = 0.0;
        let mut t = 1.0;
        for k in 1..40 {
            i0 += t;
            t /= (k * k) as f64;
        }
        let v = half_square().eval(2.0).unwrap();
        assert!((v.value - i0).abs() < 1e-15 * i0);
        assert!((v.value - 2.279_585_302_336_067).abs() < 1e-14);
        assert_eq!(half_square().eval(0.0).unwrap().value, 1.0);
    }

    #[test]
    fn root_not_below_alpha() {
        let psi = Preset::Bessel { nu: 1.0 }.exponent().unwrap();
        let err = SeriesEvaluator::new(psi, 1.0).unwrap_err();
        assert!(err.to_string().starts_with("root >= alpha"));
    }

    #[test]
    fn bessel_three_hitting() {
        let se = SeriesEvaluator::new(Preset::Bessel { nu: 3.0 }.exponent().unwrap(), 2.0).unwrap();
        let s = 2f64.sqrt();
        let v = se.hitting_laplace(0.0, 1.0, 1.0).unwrap();
        assert!((v - s / s.sinh()).abs() < 1e-14);
        assert_eq!(se.hitting_laplace(0.7, 0.7, 3.0).unwrap(), 1.0);
        assert!(se.hitting_laplace(1.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn tail_bound_dominates() {
        let se = half_square();
        for z in [0.5, 5.0, 40.0, 300.0] {
            let v = se.eval(z).unwrap();
            let coeffs = se.coefficients(v.terms_used + 50).unwrap();
            let mut s = CompensatedSum::new();
            for (n, a) in coeffs.iter().enumerate() {
                s.add(a * z.powi(n as i32));
            }
            assert!((s.value() - v.value).abs() <= v.tail_bound + 4.0 * f64::EPSILON * v.value, "z = {z}");
        }
    }

    #[test]
    fn large_argument_overflow_is_reported() {
        assert!(matches!(half_square().eval(1e300), Err(Error::Overflow(_))));
    }
}
