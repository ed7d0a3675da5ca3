//! Special functions by their defining series, and conformance checks that
//! tie each exponent family's `I_{ψ,α}` to its closed form.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponent::LevyExponent;
use crate::numerics::{ln_gamma, recip_gamma, CompensatedSum};
use crate::presets::Preset;
use crate::series::SeriesEvaluator;

const TOL: f64 = 1e-16;
const MAX_TERMS: usize = 100_000;
const MAX_ARGUMENT: f64 = 1e3;

/// Conformance tolerance on the relative error.
pub const CONFORMANCE_TOLERANCE: f64 = 1e-10;
pub const CONFORMANCE_POINTS: usize = 200;
pub const CONFORMANCE_RANGE: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpecialFnParams {
    /// Modified Bessel function of the first kind `I_order`.
    BesselI { order: f64 },
    /// `E_{α,β}(x) = Σ xⁿ/Γ(αn+β)`.
    MittagLeffler { alpha: f64, beta: f64 },
    /// `₁F₁(a; b; x)`
    Hyp1f1 { a: f64, b: f64 },
    /// `₁F₂(a; b1, b2; x)`
    Hyp1f2 { a: f64, b1: f64, b2: f64 },
    /// `Σ (num_base)_{num_rate·n} / ((den_base)_{den_rate·n} n!) xⁿ`
    #[serde(rename = "wright_1psi1")]
    Wright1Psi1 { num_rate: f64, num_base: f64, den_rate: f64, den_base: f64 },
}

fn nonpositive_integer(b: f64) -> bool {
    b <= 0.0 && b == b.floor()
}

/// Sums terms produced by `term(k)` with the two-small-decreasing-terms rule.
fn sum_series<F: FnMut(usize) -> f64>(mut term: F) -> Result<f64> {
    let mut sum = CompensatedSum::new();
    let mut prev = f64::INFINITY;
    let mut small_run = 0;
    for k in 0..MAX_TERMS {
        let t = term(k);
        sum.add(t);
        let total = sum.value();
        if !total.is_finite() {
            return Err(Error::Overflow(k as f64));
        }
        if t.abs() <= TOL * total.abs() && t.abs() <= prev {
            small_run += 1;
            if small_run >= 2 {
                return Ok(total);
            }
        } else {
            small_run = 0;
        }
        prev = t.abs();
    }
    Err(Error::NonConvergent { z: f64::NAN, terms: MAX_TERMS })
}

/// Evaluates a special function at `x >= 0`.
pub fn eval_special(p: &SpecialFnParams, x: f64) -> Result<f64> {
    if !(x >= 0.0) || x > MAX_ARGUMENT {
        return Err(invalid(format!("special functions are evaluated on [0, {MAX_ARGUMENT}], got {x}")));
    }
    let out = match *p {
        SpecialFnParams::BesselI { order } => bessel_i(order, x),
        SpecialFnParams::MittagLeffler { alpha, beta } => mittag_leffler(alpha, beta, x),
        SpecialFnParams::Hyp1f1 { a, b } => hyp1f1(a, b, x),
        SpecialFnParams::Hyp1f2 { a, b1, b2 } => hyp1f2(a, b1, b2, x),
        SpecialFnParams::Wright1Psi1 { num_rate, num_base, den_rate, den_base } => {
            wright_1psi1(num_rate, num_base, den_rate, den_base, x)
        }
    };
    out.map_err(|e| match e {
        Error::NonConvergent { terms, .. } => Error::NonConvergent { z: x, terms },
        Error::Overflow(_) => Error::Overflow(x),
        other => other,
    })
}

fn bessel_i(order: f64, x: f64) -> Result<f64> {
    if !order.is_finite() {
        return Err(invalid("Bessel order must be finite"));
    }
    if order < 0.0 && order == order.floor() {
        return bessel_i(-order, x);
    }
    if x == 0.0 {
        return if order == 0.0 {
            Ok(1.0)
        } else if order > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::ParameterPole(format!("I_{order}(0) is infinite")))
        };
    }
    let ln_half = (0.5 * x).ln();
    sum_series(|k| {
        let k = k as f64;
        let b = k + order + 1.0;
        if b > 0.0 {
            ((2.0 * k + order) * ln_half - ln_gamma(k + 1.0) - ln_gamma(b)).exp()
        } else {
            ((2.0 * k + order) * ln_half - ln_gamma(k + 1.0)).exp() * recip_gamma(b)
        }
    })
}

fn mittag_leffler(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0) || !beta.is_finite() {
        return Err(invalid(format!("Mittag-Leffler needs alpha > 0, got alpha = {alpha}, beta = {beta}")));
    }
    if x == 0.0 {
        return Ok(recip_gamma(beta));
    }
    if beta <= 0.0 {
        return Err(Error::ParameterPole(format!("Mittag-Leffler beta = {beta} must be positive here")));
    }
    let ln_x = x.ln();
    sum_series(|n| {
        let n = n as f64;
        (n * ln_x - ln_gamma(alpha * n + beta)).exp()
    })
}

fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if nonpositive_integer(b) {
        return Err(Error::ParameterPole(format!("1F1 denominator parameter b = {b} is a non-positive integer")));
    }
    let mut t = 1.0;
    sum_series(|k| {
        if k > 0 {
            let k = k as f64;
            t *= (a + k - 1.0) / (b + k - 1.0) * x / k;
        }
        t
    })
}

fn hyp1f2(a: f64, b1: f64, b2: f64, x: f64) -> Result<f64> {
    for b in [b1, b2] {
        if nonpositive_integer(b) {
            return Err(Error::ParameterPole(format!("1F2 denominator parameter {b} is a non-positive integer")));
        }
    }
    let mut t = 1.0;
    sum_series(|k| {
        if k > 0 {
            let k = k as f64;
            t *= (a + k - 1.0) / ((b1 + k - 1.0) * (b2 + k - 1.0)) * x / k;
        }
        t
    })
}

fn wright_1psi1(num_rate: f64, num_base: f64, den_rate: f64, den_base: f64, x: f64) -> Result<f64> {
    if !(num_base > 0.0 && den_base > 0.0 && num_rate >= 0.0 && den_rate > 0.0) {
        return Err(Error::ParameterPole(format!(
            "Wright series needs positive bases and rates, got ({num_rate}, {num_base}), ({den_rate}, {den_base})"
        )));
    }
    if num_rate > den_rate + 1.0 {
        return Err(invalid("Wright series diverges when the numerator rate exceeds the denominator rate plus one"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let ln_x = x.ln();
    let (g_num, g_den) = (ln_gamma(num_base), ln_gamma(den_base));
    sum_series(|n| {
        let nf = n as f64;
        let ln_num = ln_gamma(num_base + num_rate * nf) - g_num;
        let ln_den = ln_gamma(den_base + den_rate * nf) - g_den;
        (ln_num - ln_den - ln_gamma(nf + 1.0) + nf * ln_x).exp()
    })
}

/// One identity `I_{φ,α}(x) = closed form` checked on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub alpha: f64,
    pub points: usize,
    pub max_rel_error: f64,
    pub worst_x: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformanceReport {
    pub preset: String,
    pub tolerance: f64,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl ConformanceReport {
    pub fn max_rel_error(&self) -> f64 {
        self.checks.iter().map(|c| c.max_rel_error).fold(0.0, f64::max)
    }
}

fn check_identity<F>(label: String, exponent: LevyExponent, alpha: f64, closed: F) -> Result<IdentityCheck>
where
    F: Fn(f64) -> Result<f64>,
{
    let se = SeriesEvaluator::new(exponent, alpha)?;
    let mut worst = (0.0f64, 0.0f64);
    for i in 0..CONFORMANCE_POINTS {
        let x = CONFORMANCE_RANGE * i as f64 / (CONFORMANCE_POINTS - 1) as f64;
        let series = se.value(x)?;
        let reference = closed(x)?;
        let rel = ((series - reference) / reference).abs();
        if !(rel <= worst.0) {
            worst = (rel, x);
        }
    }
    Ok(IdentityCheck {
        identity: label,
        alpha,
        points: CONFORMANCE_POINTS,
        max_rel_error: worst.0,
        worst_x: worst.1,
        pass: worst.0 < CONFORMANCE_TOLERANCE,
    })
}

/// Checks the closed forms of `I_{ψ,α}` (and of `I_{T_αψ,α}` where one is
/// known) for an exponent family on 200 points of [0, 50].
pub fn conformance_suite(preset: &Preset) -> Result<ConformanceReport> {
    preset.validate()?;
    let psi = preset.exponent()?;
    let mut checks = Vec::new();
    match *preset {
        Preset::Bessel { nu } => {
            let order = nu / 2.0 - 1.0;
            let scale = ln_gamma(nu / 2.0).exp();
            let p = SpecialFnParams::BesselI { order };
            checks.push(check_identity(format!("I = Γ({})·I_{{{order}}}(√(2x))·(√(2x)/2)^({})", nu / 2.0, -order), psi, 2.0, |x| {
                if x == 0.0 {
                    return Ok(1.0);
                }
                let r = (2.0 * x).sqrt();
                Ok(scale * eval_special(&p, r)? * (0.5 * r).powf(-order))
            })?);
        }
        Preset::KilledBessel { .. } => {
            let (tp, tm) = preset.killed_bessel_roots().expect("killed bessel roots");
            let p1 = SpecialFnParams::Hyp1f2 { a: 1.0, b1: 1.0 - tp / 2.0, b2: 1.0 - tm / 2.0 };
            let p2 = SpecialFnParams::Hyp1f2 { a: 2.0, b1: 2.0 - tp / 2.0, b2: 2.0 - tm / 2.0 };
            checks.push(check_identity(format!("I = 1F2(1; {}, {}; x/2)", 1.0 - tp / 2.0, 1.0 - tm / 2.0), psi.clone(), 2.0, |x| {
                eval_special(&p1, x / 2.0)
            })?);
            checks.push(check_identity(
                format!("I_T = 1F2(2; {}, {}; x/2)", 2.0 - tp / 2.0, 2.0 - tm / 2.0),
                psi.tee_transform(2.0)?,
                2.0,
                |x| eval_special(&p2, x / 2.0),
            )?);
        }
        Preset::Stable { alpha } => {
            let e1 = SpecialFnParams::MittagLeffler { alpha, beta: 1.0 };
            let ea = SpecialFnParams::MittagLeffler { alpha, beta: alpha };
            let gamma_alpha = ln_gamma(alpha).exp();
            checks.push(check_identity(format!("I = E_{{{alpha},1}}(x)"), psi.clone(), alpha, |x| eval_special(&e1, x))?);
            checks.push(check_identity(
                format!("I_T = Γ({alpha})·E_{{{alpha},{alpha}}}(x)"),
                psi.tee_transform(alpha)?,
                alpha,
                |x| Ok(gamma_alpha * eval_special(&ea, x)?),
            )?);
        }
        Preset::TeeStable { alpha, beta } => {
            let w = SpecialFnParams::Wright1Psi1 { num_rate: 1.0, num_base: beta / alpha, den_rate: alpha, den_base: beta };
            checks.push(check_identity(
                format!("I = 1Psi1((1, {}), ({alpha}, {beta}); x)", beta / alpha),
                psi,
                alpha,
                |x| eval_special(&w, x),
            )?);
        }
        Preset::Sawtooth { gamma, kappa } => {
            let f = SpecialFnParams::Hyp1f1 { a: gamma + kappa - 1.0, b: gamma - 1.0 };
            let ft = SpecialFnParams::Hyp1f1 { a: gamma + kappa, b: gamma };
            checks.push(check_identity(format!("I = 1F1({}; {}; x)", gamma + kappa - 1.0, gamma - 1.0), psi.clone(), 1.0, |x| {
                eval_special(&f, x)
            })?);
            checks.push(check_identity(
                format!("I_T = 1F1({}; {gamma}; x)", gamma + kappa),
                psi.tee_transform(1.0)?,
                1.0,
                |x| eval_special(&ft, x),
            )?);
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(ConformanceReport { preset: preset.to_string(), tolerance: CONFORMANCE_TOLERANCE, checks, pass })
}
