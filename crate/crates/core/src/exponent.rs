//! Laplace exponents of (possibly killed) spectrally negative Lévy processes.
//!
//! An exponent is a sum of primitive terms followed by a stack of wrappers.
//! The wrappers implement the Esscher shift `ψ(u+β) - ψ(β)` and the transform
//! `T_β ψ(u) = u/(u+β) ψ(u+β)`, so the class is closed under both without any
//! symbolic algebra. When every primitive is rational in `u` (no Pochhammer
//! term), [`LevyExponent::canonical`] folds the wrappers back into primitives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::gamma::{gamma_ratio, gamma_ratio_complex};
use crate::numerics::roots::bisect;

/// Upper end of the search for the largest root of ψ.
pub const DEFAULT_ROOT_BOUND: f64 = 1e3;
const ROOT_TOL: f64 = 1e-12;
const CONVEXITY_TOL: f64 = 1e-9;
const POCHHAMMER_ZERO_WINDOW: f64 = 1e-14;

/// One primitive term of an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    /// `sigma2 u²/2 + drift u`
    Quadratic { sigma2: f64, drift: f64 },
    /// `-rate u/(u + jump_scale)`: compound Poisson with exponential downward jumps.
    CpExpJumps { rate: f64, jump_scale: f64 },
    /// `scale Γ(u+1)/Γ(u+1-index)` with `index` in (1, 2).
    Pochhammer { scale: f64, index: f64 },
    /// `-q`
    Killing { q: f64 },
}

/// Transform applied on top of the primitive sum, innermost first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Wrapper {
    Esscher { beta: f64 },
    Tee { beta: f64 },
}

impl Component {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Component::Quadratic { sigma2, drift } => sigma2.is_finite() && sigma2 >= 0.0 && drift.is_finite(),
            Component::CpExpJumps { rate, jump_scale } => {
                rate.is_finite() && rate >= 0.0 && jump_scale.is_finite() && jump_scale > 0.0
            }
            Component::Pochhammer { scale, index } => {
                scale.is_finite() && scale > 0.0 && index > 1.0 && index < 2.0
            }
            Component::Killing { q } => q.is_finite() && q >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("component out of range: {self:?}")))
        }
    }

    fn eval(&self, u: f64) -> f64 {
        match *self {
            Component::Quadratic { sigma2, drift } => 0.5 * sigma2 * u * u + drift * u,
            Component::CpExpJumps { rate, jump_scale } => -rate * u / (u + jump_scale),
            Component::Pochhammer { scale, index } => {
                if (u - (index - 1.0)).abs() < POCHHAMMER_ZERO_WINDOW {
                    0.0
                } else {
                    scale * gamma_ratio(u + 1.0, u + 1.0 - index)
                }
            }
            Component::Killing { q } => -q,
        }
    }

    fn eval_complex(&self, s: Complex64) -> Complex64 {
        match *self {
            Component::Quadratic { sigma2, drift } => 0.5 * sigma2 * s * s + drift * s,
            Component::CpExpJumps { rate, jump_scale } => -rate * s / (s + jump_scale),
            Component::Pochhammer { scale, index } => scale * gamma_ratio_complex(s + 1.0, s + 1.0 - index),
            Component::Killing { q } => Complex64::new(-q, 0.0),
        }
    }

    fn derivative(&self, u: f64) -> f64 {
        match *self {
            Component::Quadratic { sigma2, drift } => sigma2 * u + drift,
            Component::CpExpJumps { rate, jump_scale } => -rate * jump_scale / ((u + jump_scale) * (u + jump_scale)),
            Component::Pochhammer { .. } => richardson_forward(|v| self.eval(v), u),
            Component::Killing { .. } => 0.0,
        }
    }
}

/// Forward-difference derivative with Richardson extrapolation. Returns -inf
/// when the quotients run off downwards instead of settling.
fn richardson_forward<F: Fn(f64) -> f64>(f: F, u: f64) -> f64 {
    const LEVELS: usize = 9;
    let f0 = f(u);
    let mut table = [[0.0f64; LEVELS]; LEVELS];
    let mut h = 0.05;
    let mut best = f64::NAN;
    let mut best_err = f64::INFINITY;
    for k in 0..LEVELS {
        table[k][0] = (f(u + h) - f0) / h;
        let mut factor = 1.0;
        for j in 1..=k {
            factor *= 2.0;
            table[k][j] = table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (factor - 1.0);
        }
        if k > 0 {
            let err = (table[k][k] - table[k - 1][k - 1]).abs();
            if err < best_err {
                best_err = err;
                best = table[k][k];
            }
        }
        h *= 0.5;
    }
    let last = table[LEVELS - 1][0];
    if last < -1e12 && last < table[0][0] {
        return f64::NEG_INFINITY;
    }
    best
}

#[derive(Deserialize)]
struct RawExponent {
    components: Vec<Component>,
    #[serde(default)]
    wrappers: Vec<Wrapper>,
}

/// Structured, evaluable Laplace exponent ψ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExponent")]
pub struct LevyExponent {
    components: Vec<Component>,
    wrappers: Vec<Wrapper>,
}

impl TryFrom<RawExponent> for LevyExponent {
    type Error = Error;

    fn try_from(raw: RawExponent) -> Result<Self> {
        let mut e = LevyExponent::new(raw.components)?;
        for w in raw.wrappers {
            e = match w {
                Wrapper::Esscher { beta } => e.esscher(beta)?,
                Wrapper::Tee { beta } => e.tee_transform(beta)?,
            };
        }
        Ok(e)
    }
}

/// Grid diagnostics reported by [`LevyExponent::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub grid_points: usize,
    pub finite: bool,
    pub convexity_violations: Vec<ConvexityViolation>,
    pub value_at_zero: f64,
    pub killing_rate: f64,
    pub derivative_at_zero: f64,
    pub largest_root: Option<f64>,
    pub root_error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityViolation {
    pub u: f64,
    pub second_difference: f64,
}

impl Diagnostics {
    pub fn is_convex(&self) -> bool {
        self.finite && self.convexity_violations.is_empty()
    }
}

impl LevyExponent {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("an exponent needs at least one component"));
        }
        for c in &components {
            c.validate()?;
        }
        Ok(Self { components, wrappers: Vec::new() })
    }

    /// `sigma2 u²/2 + drift u`
    pub fn quadratic(sigma2: f64, drift: f64) -> Result<Self> {
        Self::new(vec![Component::Quadratic { sigma2, drift }])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn wrappers(&self) -> &[Wrapper] {
        &self.wrappers
    }

    pub fn is_wrapper_free(&self) -> bool {
        self.wrappers.is_empty()
    }

    pub fn has_pochhammer(&self) -> bool {
        self.components.iter().any(|c| matches!(c, Component::Pochhammer { .. }))
    }

    /// ψ(u) for u >= 0.
    pub fn evaluate(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) || !u.is_finite() {
            return Err(invalid(format!("exponent argument must be finite and >= 0, got {u}")));
        }
        let v = self.eval_level(u, self.wrappers.len());
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(u))
        }
    }

    /// ψ(s) on the complex plane, used by contour inversion of 1/ψ.
    pub fn evaluate_complex(&self, s: Complex64) -> Complex64 {
        self.eval_complex_level(s, self.wrappers.len())
    }

    fn eval_level(&self, u: f64, level: usize) -> f64 {
        if level == 0 {
            return self.components.iter().map(|c| c.eval(u)).sum();
        }
        match self.wrappers[level - 1] {
            Wrapper::Esscher { beta } => {
                if beta == 0.0 {
                    self.eval_level(u, level - 1)
                } else if u == 0.0 {
                    0.0
                } else {
                    self.eval_level(u + beta, level - 1) - self.eval_level(beta, level - 1)
                }
            }
            Wrapper::Tee { beta } => {
                if beta == 0.0 {
                    self.eval_level(u, level - 1)
                } else if u == 0.0 {
                    0.0
                } else {
                    u / (u + beta) * self.eval_level(u + beta, level - 1)
                }
            }
        }
    }

    fn eval_complex_level(&self, s: Complex64, level: usize) -> Complex64 {
        if level == 0 {
            return self.components.iter().map(|c| c.eval_complex(s)).sum();
        }
        match self.wrappers[level - 1] {
            Wrapper::Esscher { beta } => {
                if beta == 0.0 {
                    self.eval_complex_level(s, level - 1)
                } else {
                    self.eval_complex_level(s + beta, level - 1) - self.eval_level(beta, level - 1)
                }
            }
            Wrapper::Tee { beta } => {
                if beta == 0.0 {
                    self.eval_complex_level(s, level - 1)
                } else {
                    s / (s + beta) * self.eval_complex_level(s + beta, level - 1)
                }
            }
        }
    }

    fn derivative_level(&self, u: f64, level: usize) -> f64 {
        if level == 0 {
            return self.components.iter().map(|c| c.derivative(u)).sum();
        }
        match self.wrappers[level - 1] {
            Wrapper::Esscher { beta } => self.derivative_level(u + beta, level - 1),
            Wrapper::Tee { beta } => {
                if beta == 0.0 {
                    return self.derivative_level(u, level - 1);
                }
                let v = u + beta;
                let mut d = beta / (v * v) * self.eval_level(v, level - 1);
                if u != 0.0 {
                    d += u / v * self.derivative_level(v, level - 1);
                }
                d
            }
        }
    }

    /// Right derivative of ψ at `u`.
    pub fn derivative(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) || !u.is_finite() {
            return Err(invalid(format!("derivative argument must be finite and >= 0, got {u}")));
        }
        Ok(self.derivative_level(u, self.wrappers.len()))
    }

    /// ψ'(0+); may be -inf.
    pub fn right_derivative_at_zero(&self) -> f64 {
        self.derivative_level(0.0, self.wrappers.len())
    }

    /// -ψ(0).
    pub fn killing_rate(&self) -> f64 {
        let q = -self.eval_level(0.0, self.wrappers.len());
        if q <= 0.0 {
            0.0
        } else {
            q
        }
    }

    /// Largest root θ of ψ in [0, ∞), searched up to [`DEFAULT_ROOT_BOUND`].
    pub fn largest_root(&self) -> Result<f64> {
        self.largest_root_within(DEFAULT_ROOT_BOUND)
    }

    pub fn largest_root_within(&self, bound: f64) -> Result<f64> {
        let at_zero = self.evaluate(0.0)?;
        if at_zero == 0.0 && self.right_derivative_at_zero() >= 0.0 {
            return Ok(0.0);
        }
        if at_zero > 0.0 {
            return Err(Error::Inconsistent(format!("ψ(0) = {at_zero} > 0 is not a Laplace exponent")));
        }
        let mut lo = 0.0;
        let mut hi = 1.0f64.min(bound);
        loop {
            if self.evaluate(hi)? > 0.0 {
                break;
            }
            if hi >= bound {
                return Err(Error::RootBeyondBound { bound });
            }
            lo = hi;
            hi = (2.0 * hi).min(bound);
        }
        Ok(bisect(|u| self.eval_level(u, self.wrappers.len()), lo, hi, true, ROOT_TOL))
    }

    /// Esscher transform `ψ(u+β) - ψ(β)`.
    pub fn esscher(&self, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        self.evaluate(beta)?;
        let mut out = self.clone();
        out.wrappers.push(Wrapper::Esscher { beta });
        Ok(out)
    }

    /// `T_β ψ(u) = u/(u+β) ψ(u+β)`.
    pub fn tee_transform(&self, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let mut out = self.clone();
        out.wrappers.push(Wrapper::Tee { beta });
        Ok(out)
    }

    /// Sum of two wrapper-free exponents.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if !self.is_wrapper_free() || !other.is_wrapper_free() {
            return Err(Error::Unsupported("sums are only formed for wrapper-free exponents".into()));
        }
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        Self::new(components)
    }

    /// `factor · ψ` for a wrapper-free exponent and factor > 0.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(invalid(format!("scale factor must be positive, got {factor}")));
        }
        if !self.is_wrapper_free() {
            return Err(Error::Unsupported("scaling is only formed for wrapper-free exponents".into()));
        }
        let components = self
            .components
            .iter()
            .map(|c| match *c {
                Component::Quadratic { sigma2, drift } => Component::Quadratic { sigma2: factor * sigma2, drift: factor * drift },
                Component::CpExpJumps { rate, jump_scale } => Component::CpExpJumps { rate: factor * rate, jump_scale },
                Component::Pochhammer { scale, index } => Component::Pochhammer { scale: factor * scale, index },
                Component::Killing { q } => Component::Killing { q: factor * q },
            })
            .collect();
        Self::new(components)
    }

    /// Convexity, sign and root diagnostics on a grid of u values.
    pub fn validate(&self, grid: &[f64]) -> Diagnostics {
        let mut pts: Vec<f64> = grid.iter().copied().filter(|u| *u >= 0.0 && u.is_finite()).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let values: Vec<Result<f64>> = pts.iter().map(|&u| self.evaluate(u)).collect();
        let finite = values.iter().all(|v| v.is_ok());
        let mut violations = Vec::new();
        if finite {
            let v: Vec<f64> = values.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect();
            for i in 1..pts.len().saturating_sub(1) {
                let (h0, h1) = (pts[i] - pts[i - 1], pts[i + 1] - pts[i]);
                let slope_diff = (v[i + 1] - v[i]) / h1 - (v[i] - v[i - 1]) / h0;
                let second = slope_diff * h0.min(h1);
                let scale = 1.0 + v[i - 1].abs() + v[i].abs() + v[i + 1].abs();
                if second < -CONVEXITY_TOL * scale {
                    violations.push(ConvexityViolation { u: pts[i], second_difference: second });
                }
            }
        }
        let value_at_zero = self.eval_level(0.0, self.wrappers.len());
        let (largest_root, root_error) = match self.largest_root() {
            Ok(t) => (Some(t), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Diagnostics {
            grid_points: pts.len(),
            finite,
            convexity_violations: violations,
            value_at_zero,
            killing_rate: self.killing_rate(),
            derivative_at_zero: self.right_derivative_at_zero(),
            largest_root,
            root_error,
        }
    }

    /// Folds the wrappers into primitives when every term is rational in u.
    pub fn canonical(&self) -> Option<RationalForm> {
        let mut form = RationalForm { sigma2: 0.0, drift: 0.0, jumps: Vec::new(), killing: 0.0 };
        for c in &self.components {
            match *c {
                Component::Quadratic { sigma2, drift } => {
                    form.sigma2 += sigma2;
                    form.drift += drift;
                }
                Component::CpExpJumps { rate, jump_scale } => form.jumps.push(ExpJump { rate, jump_scale }),
                Component::Killing { q } => form.killing += q,
                Component::Pochhammer { .. } => return None,
            }
        }
        for w in &self.wrappers {
            form = match *w {
                Wrapper::Esscher { beta } => form.esscher(beta),
                Wrapper::Tee { beta } => form.tee(beta),
            };
        }
        Some(form.normalized())
    }

    /// Canonical primitive-only form when available, otherwise a clone.
    pub fn simplify(&self) -> Self {
        self.canonical().map(|f| f.to_exponent()).unwrap_or_else(|| self.clone())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta >= 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("transform parameter must be finite and >= 0, got {beta}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpJump {
    pub rate: f64,
    pub jump_scale: f64,
}

/// `sigma2 u²/2 + drift u - Σ rate u/(u+jump_scale) - killing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalForm {
    pub sigma2: f64,
    pub drift: f64,
    pub jumps: Vec<ExpJump>,
    pub killing: f64,
}

impl RationalForm {
    pub fn eval(&self, u: f64) -> f64 {
        let jumps: f64 = self.jumps.iter().map(|j| j.rate * u / (u + j.jump_scale)).sum();
        0.5 * self.sigma2 * u * u + self.drift * u - jumps - self.killing
    }

    pub fn derivative(&self, u: f64) -> f64 {
        let jumps: f64 = self
            .jumps
            .iter()
            .map(|j| j.rate * j.jump_scale / ((u + j.jump_scale) * (u + j.jump_scale)))
            .sum();
        self.sigma2 * u + self.drift - jumps
    }

    /// Total jump intensity.
    pub fn jump_rate(&self) -> f64 {
        self.jumps.iter().map(|j| j.rate).sum()
    }

    fn tee(mut self, beta: f64) -> Self {
        if beta == 0.0 {
            return self;
        }
        self.drift += 0.5 * self.sigma2 * beta;
        for j in &mut self.jumps {
            j.jump_scale += beta;
        }
        if self.killing > 0.0 {
            self.jumps.push(ExpJump { rate: self.killing, jump_scale: beta });
        }
        self.killing = 0.0;
        self
    }

    fn esscher(mut self, beta: f64) -> Self {
        if beta == 0.0 {
            return self;
        }
        self.drift += self.sigma2 * beta;
        for j in &mut self.jumps {
            j.rate *= j.jump_scale / (j.jump_scale + beta);
            j.jump_scale += beta;
        }
        self.killing = 0.0;
        self
    }

    fn normalized(mut self) -> Self {
        self.jumps.retain(|j| j.rate > 0.0);
        self.jumps.sort_by(|a, b| a.jump_scale.total_cmp(&b.jump_scale));
        let mut merged: Vec<ExpJump> = Vec::with_capacity(self.jumps.len());
        for j in self.jumps {
            match merged.last_mut() {
                Some(last) if last.jump_scale == j.jump_scale => last.rate += j.rate,
                _ => merged.push(j),
            }
        }
        self.jumps = merged;
        self
    }

    pub fn to_exponent(&self) -> LevyExponent {
        let mut components = Vec::new();
        if self.sigma2 != 0.0 || self.drift != 0.0 || (self.jumps.is_empty() && self.killing == 0.0) {
            components.push(Component::Quadratic { sigma2: self.sigma2, drift: self.drift });
        }
        for j in &self.jumps {
            components.push(Component::CpExpJumps { rate: j.rate, jump_scale: j.jump_scale });
        }
        if self.killing > 0.0 {
            components.push(Component::Killing { q: self.killing });
        }
        LevyExponent { components, wrappers: Vec::new() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bessel(nu: f64) -> LevyExponent {
        LevyExponent::quadratic(1.0, nu / 2.0 - 1.0).unwrap()
    }

    fn stable(alpha: f64) -> LevyExponent {
        LevyExponent::new(vec![Component::Pochhammer { scale: 1.0, index: alpha }]).unwrap()
    }

    fn sawtooth(gamma: f64, kappa: f64) -> LevyExponent {
        LevyExponent::new(vec![
            Component::Quadratic { sigma2: 0.0, drift: 1.0 },
            Component::CpExpJumps { rate: kappa, jump_scale: gamma + kappa - 2.0 },
        ])
        .unwrap()
    }

    #[test]
    fn bessel_three_at_two() {
        // u²/2 + u/2 at u = 2
        assert_eq!(bessel(3.0).evaluate(2.0).unwrap(), 3.0);
        assert_eq!(bessel(3.0).evaluate(0.0).unwrap(), 0.0);
    }

    #[test]
    fn stable_vanishes_at_index_minus_one() {
        assert_eq!(stable(1.5).evaluate(0.5).unwrap(), 0.0);
        assert!(stable(1.5).evaluate(0.0).unwrap() < 0.0);
        // Γ(1)/Γ(-0.5) = -1/(2√π)
        let v = stable(1.5).evaluate(0.0).unwrap();
        assert!((v + 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(matches!(bessel(3.0).evaluate(-1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn overflow_is_reported() {
        let e = LevyExponent::new(vec![Component::Pochhammer { scale: 1e300, index: 1.9 }]).unwrap();
        assert!(matches!(e.evaluate(1e10), Err(Error::Overflow(_))));
    }

    #[test]
    fn killing_rates() {
        assert_eq!(LevyExponent::quadratic(1.0, 0.0).unwrap().killing_rate(), 0.0);
        let killed = bessel(3.0).plus(&LevyExponent::new(vec![Component::Killing { q: 0.5 }]).unwrap()).unwrap();
        assert_eq!(killed.killing_rate(), 0.5);
        assert_eq!(killed.tee_transform(2.0).unwrap().killing_rate(), 0.0);
        assert_eq!(killed.tee_transform(0.0).unwrap().killing_rate(), 0.5);
    }

    #[test]
    fn derivatives_at_zero() {
        assert_eq!(bessel(2.0).right_derivative_at_zero(), 0.0);
        assert!((sawtooth(3.0, 1.0).right_derivative_at_zero() - 0.5).abs() < 1e-15);
        // (T_α ψ)'(0+) = ψ(α)/α
        let psi = stable(1.5);
        let t = psi.tee_transform(1.5).unwrap();
        let expected = psi.evaluate(1.5).unwrap() / 1.5;
        assert!((t.right_derivative_at_zero() - expected).abs() < 1e-14);
    }

    #[test]
    fn pochhammer_derivative_matches_digamma_form() {
        // d/du Γ(u+1)/Γ(u+1-α) at u = 0.7, α = 1.5 against a central difference
        let psi = stable(1.5);
        let h = 1e-5;
        let central = (psi.evaluate(0.7 + h).unwrap() - psi.evaluate(0.7 - h).unwrap()) / (2.0 * h);
        let d = psi.derivative(0.7).unwrap();
        assert!((d - central).abs() < 1e-8, "{d} vs {central}");
    }

    #[test]
    fn roots() {
        assert!((bessel(1.0).largest_root().unwrap() - 1.0).abs() < 1e-12);
        assert!((stable(1.5).largest_root().unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(LevyExponent::quadratic(1.0, 1.0).unwrap().largest_root().unwrap(), 0.0);
        let neg = LevyExponent::quadratic(0.0, -1.0).unwrap();
        assert!(matches!(neg.largest_root(), Err(Error::RootBeyondBound { .. })));
    }

    #[test]
    fn esscher_examples() {
        let psi = LevyExponent::quadratic(1.0, 0.0).unwrap();
        assert_eq!(psi.esscher(1.0).unwrap().evaluate(1.0).unwrap(), 1.5);
        assert_eq!(psi.esscher(1.0).unwrap().evaluate(0.0).unwrap(), 0.0);
        let id = sawtooth(3.0, 1.0).esscher(0.0).unwrap();
        for u in [0.0, 0.3, 2.0, 7.5] {
            assert_eq!(id.evaluate(u).unwrap(), sawtooth(3.0, 1.0).evaluate(u).unwrap());
        }
    }

    #[test]
    fn tee_examples() {
        let psi = LevyExponent::quadratic(1.0, 0.0).unwrap();
        let t = psi.tee_transform(1.0).unwrap();
        assert!((t.evaluate(2.0).unwrap() - 3.0).abs() < 1e-15);
        for u in [0.5, 1.0, 2.0, 5.0] {
            let a = bessel(3.0).tee_transform(2.0).unwrap().evaluate(u).unwrap();
            let b = bessel(5.0).evaluate(u).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn canonical_forms() {
        let t = bessel(3.0).tee_transform(2.0).unwrap();
        assert_eq!(t.simplify(), bessel(5.0));

        // killed quadratic picks up exponential jumps at rate q, scale β
        let killed = bessel(3.0).plus(&LevyExponent::new(vec![Component::Killing { q: 1.0 }]).unwrap()).unwrap();
        let form = killed.tee_transform(2.0).unwrap().canonical().unwrap();
        assert_eq!(form.jumps, vec![ExpJump { rate: 1.0, jump_scale: 2.0 }]);
        assert_eq!(form.killing, 0.0);
        assert_eq!(form.drift, 1.5);

        // saw-tooth: T_1 shifts the jump scale by one
        let st = sawtooth(3.0, 1.0).tee_transform(1.0).unwrap().canonical().unwrap();
        assert_eq!(st.jumps, vec![ExpJump { rate: 1.0, jump_scale: 3.0 }]);

        // Esscher on jumps agrees pointwise
        let e = sawtooth(3.0, 1.0).esscher(0.7).unwrap();
        let form = e.canonical().unwrap();
        for u in [0.1, 1.0, 4.0] {
            assert!((form.eval(u) - e.evaluate(u).unwrap()).abs() < 1e-14);
        }
        assert!(stable(1.5).canonical().is_none());
    }

    #[test]
    fn validate_reports() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let d = bessel(3.0).validate(&grid);
        assert!(d.is_convex());
        assert_eq!(d.largest_root, Some(0.0));

        let d = stable(1.5).tee_transform(1.5).unwrap().validate(&grid);
        assert!(d.is_convex());
        assert_eq!(d.value_at_zero, 0.0);
        assert_eq!(d.killing_rate, 0.0);

        let d = LevyExponent::quadratic(0.0, -1.0).unwrap().validate(&grid);
        assert!(d.is_convex());
        assert!(d.derivative_at_zero < 0.0);
        assert!(d.root_error.unwrap().contains("root beyond search bound"));
    }

    #[test]
    fn json_round_trip_and_schema() {
        let text = r#"{"components":[{"kind":"quadratic","sigma2":1.0,"drift":0.5}],"wrappers":[{"kind":"tee","beta":2.0}]}"#;
        let e: LevyExponent = serde_json::from_str(text).unwrap();
        assert_eq!(e.wrappers(), &[Wrapper::Tee { beta: 2.0 }]);
        let back: LevyExponent = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
        let bad = r#"{"components":[{"kind":"pochhammer","scale":1.0,"index":2.5}]}"#;
        assert!(serde_json::from_str::<LevyExponent>(bad).is_err());
    }
}
