//! Scale functions of unkilled exponents with positive mean, and the ruin and
//! overshoot identities built on them.
//!
//! Rational exponents are inverted exactly by partial fractions; anything else
//! goes through fixed-Talbot inversion of `1/ψ`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponent::{Component, LevyExponent, RationalForm};
use crate::numerics::{integrate, roots::bisect};

pub const DEFAULT_TALBOT_NODES: usize = 24;
pub const TALBOT_CHECK_EXTRA: usize = 16;
pub const TALBOT_TOLERANCE: f64 = 1e-7;
const CACHE_GRID: f64 = 1e12;
const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleMethod {
    /// Partial fractions when the exponent is rational, Talbot otherwise.
    Auto,
    ClosedForm,
    Talbot,
}

/// `W(x) = Σ weight_i exp(root_i x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialFractions {
    pub roots: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PartialFractions {
    /// Requires zero killing and `ψ'(0+) > 0`.
    pub fn from_rational(form: &RationalForm) -> Result<Self> {
        if form.killing != 0.0 {
            return Err(Error::Unsupported("scale function of a killed exponent".into()));
        }
        let slope = |u: f64| {
            0.5 * form.sigma2 + form.jumps.iter().map(|j| j.rate / ((u + j.jump_scale) * (u + j.jump_scale))).sum::<f64>()
        };
        let g = |u: f64| 0.5 * form.sigma2 * u + form.drift - form.jumps.iter().map(|j| j.rate / (u + j.jump_scale)).sum::<f64>();
        let g0 = g(0.0);
        if !(g0 > 0.0) {
            return Err(Error::Unsupported(format!("scale function needs ψ'(0+) > 0, got {g0}")));
        }
        let mut roots = vec![0.0];
        let mut weights = vec![1.0 / g0];
        // ψ(u)/u increases between consecutive poles -ρ_i, so each gap holds one root
        let mut right = 0.0;
        for j in &form.jumps {
            let left = -j.jump_scale;
            let r = bisect(g, left, right, true, 0.0);
            roots.push(r);
            weights.push(1.0 / (r * slope(r)));
            right = left;
        }
        if form.sigma2 > 0.0 {
            let mut width = 1.0f64.max(-right);
            let mut left = right - width;
            while g(left) >= 0.0 {
                width *= 2.0;
                left = right - width;
                if !left.is_finite() {
                    return Err(Error::Inconsistent("no leftmost root of ψ(u)/u".into()));
                }
            }
            let r = bisect(g, left, right, true, 0.0);
            roots.push(r);
            weights.push(1.0 / (r * slope(r)));
        }
        Ok(Self { roots, weights })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        self.roots.iter().zip(&self.weights).map(|(r, w)| w * (r * x).exp()).sum()
    }
}

/// Fixed-Talbot inverse Laplace transform of `F` at `t > 0` with `m` nodes.
pub fn talbot_invert<F: Fn(Complex64) -> Complex64>(f: F, t: f64, m: usize) -> f64 {
    let r = 2.0 * m as f64 / (5.0 * t);
    let mut acc = 0.5 * (f(Complex64::new(r, 0.0)) * (r * t).exp()).re;
    for k in 1..m {
        let theta = k as f64 * PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        acc += ((s * t).exp() * f(s) * Complex64::new(1.0, sigma)).re;
    }
    r / m as f64 * acc
}

#[derive(Debug, Clone)]
enum Resolved {
    Closed(PartialFractions),
    Talbot { nodes: usize },
}

/// Scale function `W` with Laplace transform `1/ψ`.
#[derive(Debug)]
pub struct ScaleFunction {
    exponent: LevyExponent,
    resolved: Resolved,
    slope_at_zero: f64,
    value_at_zero: f64,
    cache: RwLock<HashMap<i64, f64>>,
}

impl ScaleFunction {
    pub fn new(exponent: LevyExponent, method: ScaleMethod) -> Result<Self> {
        Self::with_nodes(exponent, method, DEFAULT_TALBOT_NODES)
    }

    pub fn with_nodes(exponent: LevyExponent, method: ScaleMethod, nodes: usize) -> Result<Self> {
        if nodes < 4 {
            return Err(invalid(format!("Talbot needs at least 4 nodes, got {nodes}")));
        }
        let q = exponent.killing_rate();
        if q != 0.0 {
            return Err(Error::Unsupported(format!("scale function of a killed exponent (killing rate {q})")));
        }
        let slope_at_zero = exponent.right_derivative_at_zero();
        if !(slope_at_zero > 0.0) {
            return Err(Error::Unsupported(format!("scale function needs ψ'(0+) > 0, got {slope_at_zero}")));
        }
        let resolved = match (method, exponent.canonical()) {
            (ScaleMethod::Auto | ScaleMethod::ClosedForm, Some(form)) => Resolved::Closed(PartialFractions::from_rational(&form)?),
            (ScaleMethod::ClosedForm, None) => {
                return Err(Error::Unsupported("closed-form scale function needs a rational exponent".into()))
            }
            _ => Resolved::Talbot { nodes },
        };
        let value_at_zero = match bounded_variation_drift(&exponent) {
            Some(d) => 1.0 / d,
            None => 0.0,
        };
        Ok(Self { exponent, resolved, slope_at_zero, value_at_zero, cache: RwLock::new(HashMap::new()) })
    }

    /// Scale function of `T_α ψ`, the kernel of the occupation formula.
    pub fn for_tee(psi: &LevyExponent, alpha: f64, method: ScaleMethod) -> Result<Self> {
        Self::new(psi.tee_transform(alpha)?, method)
    }

    pub fn exponent(&self) -> &LevyExponent {
        &self.exponent
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.resolved, Resolved::Closed(_))
    }

    pub fn partial_fractions(&self) -> Option<&PartialFractions> {
        match &self.resolved {
            Resolved::Closed(pf) => Some(pf),
            Resolved::Talbot { .. } => None,
        }
    }

    /// `ψ'(0+)`.
    pub fn slope_at_zero(&self) -> f64 {
        self.slope_at_zero
    }

    /// `W(∞) = 1/ψ'(0+)`.
    pub fn limit_at_infinity(&self) -> f64 {
        1.0 / self.slope_at_zero
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(invalid("scale function argument is NaN"));
        }
        if x < 0.0 {
            return Ok(0.0);
        }
        if x == 0.0 {
            return Ok(self.value_at_zero);
        }
        if x == f64::INFINITY {
            return Ok(self.limit_at_infinity());
        }
        match &self.resolved {
            Resolved::Closed(pf) => Ok(pf.eval(x)),
            Resolved::Talbot { nodes } => {
                let key = (x * CACHE_GRID).round();
                let cacheable = key.abs() < 9.0e18;
                if cacheable {
                    if let Some(v) = self.cache.read().ok().and_then(|c| c.get(&(key as i64)).copied()) {
                        return Ok(v);
                    }
                }
                let v = self.talbot_checked(x, *nodes)?;
                if cacheable {
                    if let Ok(mut c) = self.cache.write() {
                        c.insert(key as i64, v);
                    }
                }
                Ok(v)
            }
        }
    }

    fn talbot_checked(&self, x: f64, nodes: usize) -> Result<f64> {
        let v = self.talbot(x, nodes);
        let check = self.talbot(x, nodes + TALBOT_CHECK_EXTRA);
        let relative = (v - check).abs() / v.abs().max(f64::MIN_POSITIVE);
        if !(relative <= TALBOT_TOLERANCE) {
            return Err(Error::InversionUnreliable { x, relative });
        }
        Ok(v.max(0.0))
    }

    /// Raw Talbot inversion of `1/ψ` at `x > 0`, no self-check.
    pub fn talbot(&self, x: f64, nodes: usize) -> f64 {
        talbot_invert(|s| self.exponent.evaluate_complex(s).inv(), x, nodes)
    }

    /// Partial-fraction value when available.
    pub fn closed_form(&self, x: f64) -> Option<f64> {
        self.partial_fractions().map(|pf| pf.eval(x))
    }

    /// `P_x(τ₀^- = ∞) = ψ'(0+) W(x)`.
    pub fn escape_probability(&self, x: f64) -> Result<f64> {
        clamp_probability(self.slope_at_zero * self.eval(x)?)
    }

    /// `∫₀ˣ exp(-u z) W(z) dz`.
    pub fn discounted_integral(&self, x: f64, u: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        let mut failure = None;
        let q = integrate(
            |z| match self.eval(z) {
                Ok(w) => (-u * z).exp() * w,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            x,
            QUAD_TOL,
            QUAD_TOL,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(q.value),
        }
    }
}

fn bounded_variation_drift(e: &LevyExponent) -> Option<f64> {
    let mut drift = 0.0;
    for c in e.components() {
        match *c {
            Component::Quadratic { sigma2, drift: b } => {
                if sigma2 > 0.0 {
                    return None;
                }
                drift += b;
            }
            Component::Pochhammer { .. } => return None,
            _ => {}
        }
    }
    Some(drift)
}

fn clamp_probability(p: f64) -> Result<f64> {
    if !(-1e-9..=1.0 + 1e-9).contains(&p) {
        return Err(Error::Inconsistent(format!("probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Probability that the process with exponent `T_α ψ` started at `ln y` never
/// passes below 0: `(ψ(α)/α) W_{T_αψ}(ln y)`.
pub fn ruin_probability(psi: &LevyExponent, alpha: f64, y: f64) -> Result<f64> {
    let scale = ScaleFunction::for_tee(psi, alpha, ScaleMethod::Auto)?;
    ruin_probability_with(&scale, psi, alpha, y)
}

/// As [`ruin_probability`] with a prebuilt scale function of `T_α ψ`.
pub fn ruin_probability_with(scale: &ScaleFunction, psi: &LevyExponent, alpha: f64, y: f64) -> Result<f64> {
    if !(y >= 1.0) {
        return Err(invalid(format!("ruin level y must be >= 1, got {y}")));
    }
    let theta = psi.largest_root()?;
    if theta >= alpha {
        return Err(Error::RootNotBelowAlpha { theta, alpha });
    }
    let c = psi.evaluate(alpha)? / alpha;
    clamp_probability(c * scale.eval(y.ln())?)
}

/// `E_x[exp(u ξ(τ₀^-)); τ₀^- < ∞]`:
/// `e^{ux} - ψ(u) e^{ux} ∫₀ˣ e^{-uz} W(z) dz - (ψ(u)/u) W(x)`, with `ψ(u)/u`
/// read as `ψ'(0+)` at `u = 0`.
pub fn overshoot_transform(scale: &ScaleFunction, x: f64, u: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid(format!("overshoot start must be finite and >= 0, got {x}")));
    }
    if !(u >= 0.0) || !u.is_finite() {
        return Err(invalid(format!("overshoot argument must be finite and >= 0, got {u}")));
    }
    let w = scale.eval(x)?;
    if u == 0.0 {
        return Ok(1.0 - scale.slope_at_zero() * w);
    }
    let psi_u = scale.exponent().evaluate(u)?;
    let e = (u * x).exp();
    Ok(e - psi_u * e * scale.discounted_integral(x, u)? - psi_u / u * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma;
    use crate::presets::Preset;

    fn bessel_tee(nu: f64) -> ScaleFunction {
        ScaleFunction::for_tee(&Preset::Bessel { nu }.exponent().unwrap(), 2.0, ScaleMethod::Auto).unwrap()
    }

    #[test]
    fn quadratic_closed_form() {
        let w = bessel_tee(3.0);
        assert!(w.is_closed_form());
        let expected = 2.0 / 3.0 * (1.0 - (-3f64).exp());
        assert!((w.eval(1.0).unwrap() - expected).abs() < 1e-15);
        assert!((w.eval(1.0).unwrap() - 0.633_475).abs() < 1e-6);
        assert_eq!(w.eval(-1.0).unwrap(), 0.0);
        assert_eq!(w.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn talbot_matches_closed_form() {
        let e = Preset::Bessel { nu: 3.0 }.exponent().unwrap().tee_transform(2.0).unwrap();
        let closed = ScaleFunction::new(e.clone(), ScaleMethod::ClosedForm).unwrap();
        let talbot = ScaleFunction::new(e, ScaleMethod::Talbot).unwrap();
        for i in 1..=50 {
            let x = 0.1 * i as f64;
            let (a, b) = (closed.eval(x).unwrap(), talbot.eval(x).unwrap());
            assert!((a - b).abs() < 1e-8 * a, "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn talbot_on_pochhammer_family() {
        // T_α of the stable exponent is Γ(u+α)/Γ(u), whose scale function is (1-e^{-x})^{α-1}/Γ(α)
        let alpha = 1.5;
        let w = ScaleFunction::for_tee(&Preset::Stable { alpha }.exponent().unwrap(), alpha, ScaleMethod::Auto).unwrap();
        assert!(!w.is_closed_form());
        for x in [0.05f64, 0.3, 1.0, 2.5, 6.0, 15.0] {
            let exact = (1.0 - (-x).exp()).powf(alpha - 1.0) / gamma(alpha);
            let v = w.eval(x).unwrap();
            assert!((v - exact).abs() < 1e-9 * exact, "x = {x}: {v} vs {exact}");
        }
    }

    #[test]
    fn jumps_give_interlaced_roots() {
        // saw-tooth T_1: u(u+2)/(u+3) with bounded variation, W(0) = 1
        let w = ScaleFunction::for_tee(&Preset::Sawtooth { gamma: 3.0, kappa: 1.0 }.exponent().unwrap(), 1.0, ScaleMethod::Auto).unwrap();
        assert!((w.eval(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((w.eval(1e-300).unwrap() - 1.0).abs() < 1e-14);
        // 1/ψ = (u+3)/(u(u+2)) = 1.5/u - 0.5/(u+2)
        for x in [0.1f64, 1.0, 4.0] {
            let exact = 1.5 - 0.5 * (-2.0 * x).exp();
            assert!((w.eval(x).unwrap() - exact).abs() < 1e-14);
        }
        assert!((w.limit_at_infinity() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn ruin_for_bessel() {
        let psi = Preset::Bessel { nu: 3.0 }.exponent().unwrap();
        assert!((ruin_probability(&psi, 2.0, 2.0).unwrap() - 0.875).abs() < 1e-14);
        assert_eq!(ruin_probability(&psi, 2.0, 1.0).unwrap(), 0.0);
        assert!((ruin_probability(&psi, 2.0, 1e6).unwrap() - 1.0).abs() < 1e-6);
        assert!(ruin_probability(&psi, 2.0, 0.5).is_err());
    }

    #[test]
    fn overshoot_boundaries() {
        let w = bessel_tee(3.0);
        assert!((overshoot_transform(&w, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let x = 2f64.ln();
        let v0 = overshoot_transform(&w, x, 0.0).unwrap();
        assert!((v0 - (1.0 - 1.5 * w.eval(x).unwrap())).abs() < 1e-15);
        // for Brownian motion with drift there is no overshoot: value = P_x(τ₀ < ∞) for all u
        let v1 = overshoot_transform(&w, x, 1.0).unwrap();
        assert!((v1 - v0).abs() < 1e-10, "{v1} vs {v0}");
    }

    #[test]
    fn killed_exponent_rejected() {
        let psi = Preset::KilledBessel { nu: 3.0, kappa: 1.0 }.exponent().unwrap();
        assert!(ScaleFunction::new(psi, ScaleMethod::Auto).is_err());
    }
}
