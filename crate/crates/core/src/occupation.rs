//! Laplace transform of the time spent below a level by the self-similar
//! process with exponent `T_α ψ`, and the analytic comparison with the
//! hitting time of the process with exponent `ψ`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exponent::LevyExponent;
use crate::numerics::{integrate, pow_nonneg, CompensatedSum};
use crate::scale::{ScaleFunction, ScaleMethod};
use crate::series::SeriesEvaluator;

pub const DEFAULT_QUAD_TOL: f64 = 1e-11;
/// Beyond this ratio x/a the integral is closed analytically.
pub const TAIL_CUTOFF: f64 = 1e3;
const UPPER_SLACK: f64 = 1e-9;
const TAIL_MAX_TERMS: usize = 10_000;

/// Evaluator of `O_q(x; a) = E_x[exp(-q ∫ 1{X_s <= a} ds)]` under `T_α ψ`.
#[derive(Debug)]
pub struct OccupationEvaluator {
    psi: LevyExponent,
    alpha: f64,
    series: SeriesEvaluator,
    series_tee: SeriesEvaluator,
    scale: ScaleFunction,
    c: f64,
    quad_tol: f64,
}

impl OccupationEvaluator {
    pub fn new(psi: LevyExponent, alpha: f64) -> Result<Self> {
        Self::with_method(psi, alpha, ScaleMethod::Auto)
    }

    pub fn with_method(psi: LevyExponent, alpha: f64, method: ScaleMethod) -> Result<Self> {
        let series = SeriesEvaluator::new(psi.clone(), alpha)?;
        let tee = psi.tee_transform(alpha)?;
        let series_tee = SeriesEvaluator::new(tee.clone(), alpha)?;
        let scale = ScaleFunction::new(tee, method)?;
        let c = psi.evaluate(alpha)? / alpha;
        Ok(Self { psi, alpha, series, series_tee, scale, c, quad_tol: DEFAULT_QUAD_TOL })
    }

    pub fn with_quadrature_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(invalid(format!("quadrature tolerance must be positive, got {tol}")));
        }
        self.quad_tol = tol;
        Ok(self)
    }

    pub fn exponent(&self) -> &LevyExponent {
        &self.psi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn series(&self) -> &SeriesEvaluator {
        &self.series
    }

    pub fn series_tee(&self) -> &SeriesEvaluator {
        &self.series_tee
    }

    pub fn scale(&self) -> &ScaleFunction {
        &self.scale
    }

    /// `E_x[exp(-q T_a)]` under `ψ`.
    pub fn hitting_laplace(&self, x: f64, a: f64, q: f64) -> Result<f64> {
        self.series.hitting_laplace(x, a, q)
    }

    pub fn occupation_laplace(&self, x: f64, a: f64, q: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(invalid(format!("start x must be finite and >= 0, got {x}")));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("level a must be positive, got {a}")));
        }
        if !(q >= 0.0) || !q.is_finite() {
            return Err(invalid(format!("q must be finite and >= 0, got {q}")));
        }
        let qa = q * pow_nonneg(a, self.alpha);
        let i_a = self.series.value(qa)?;
        let y = x / a;
        let value = if y <= 1.0 {
            self.series_tee.value(qa * pow_nonneg(y, self.alpha))? / i_a
        } else {
            let first = self.series_tee.value(qa)? / i_a;
            let second = if qa == 0.0 { 0.0 } else { qa / i_a * self.integral(y, qa)? };
            let w = self.scale.eval(y.ln())?;
            let third = self.c * w * (1.0 - self.series.value(qa * pow_nonneg(y, -self.alpha))? / i_a);
            first - second + third
        };
        if !(value > 0.0 && value <= 1.0 + UPPER_SLACK) {
            return Err(Error::Inconsistent(format!("occupation transform {value} outside (0, 1] at x = {x}, a = {a}, q = {q}")));
        }
        Ok(value.min(1.0))
    }

    /// `∫₁^y z^{-α-1} W(ln z) I_T(qa z^{-α}) dz`.
    fn integral(&self, y: f64, qa: f64) -> Result<f64> {
        let upper = y.min(TAIL_CUTOFF);
        let alpha = self.alpha;
        let mut failure = None;
        let quad = integrate(
            |z| {
                let r = self
                    .scale
                    .eval(z.ln())
                    .and_then(|w| Ok(w * self.series_tee.value(qa * pow_nonneg(z, -alpha))?));
                match r {
                    Ok(v) => pow_nonneg(z, -alpha - 1.0) * v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            1.0,
            upper,
            self.quad_tol,
            0.0,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        let mut total = quad.value;
        if y > TAIL_CUTOFF {
            total += self.tail(TAIL_CUTOFF, y, qa)?;
        }
        Ok(total)
    }

    /// Tail of the integral over `[z0, z1]`, integrated term by term in the
    /// series. `W(ln z)` is expanded exactly when it is a sum of exponentials,
    /// and replaced by `W(∞)` otherwise.
    fn tail(&self, z0: f64, z1: f64, qa: f64) -> Result<f64> {
        let terms: Vec<(f64, f64)> = match self.scale.partial_fractions() {
            Some(pf) => pf.roots.iter().copied().zip(pf.weights.iter().copied()).collect(),
            None => vec![(0.0, self.scale.limit_at_infinity())],
        };
        let (l0, l1) = (z0.ln(), z1.ln());
        let mut sum = CompensatedSum::new();
        // a_n qaⁿ from the memoized coefficients
        let mut coeff_power = 1.0;
        let mut n = 0usize;
        let mut batch = 64usize;
        loop {
            let coeffs = self.series_tee.coefficients(batch)?;
            while n <= batch {
                coeff_power = if n == 0 { 1.0 } else { coeffs[n] * qa.powi(n as i32) };
                let mut contribution = 0.0;
                for &(root, weight) in &terms {
                    let e = root - alpha_shift(self.alpha, n);
                    contribution += weight * ((e * l0).exp() - (e * l1).exp()) / -e;
                }
                let t = coeff_power * contribution;
                sum.add(t);
                if n > 0 && t.abs() <= 1e-18 * sum.value().abs() {
                    return Ok(sum.value());
                }
                n += 1;
                if n > TAIL_MAX_TERMS {
                    return Err(Error::NonConvergent { z: qa, terms: n });
                }
            }
            if !coeff_power.is_finite() {
                return Err(Error::Overflow(qa));
            }
            batch *= 2;
        }
    }

    /// Hitting and occupation transforms side by side at `x = 0`.
    pub fn ct_analytic_verdict(&self, a: f64, q_grid: &[f64]) -> Result<CtReport> {
        let mut rows = Vec::with_capacity(q_grid.len());
        for &q in q_grid {
            let hitting = self.hitting_laplace(0.0, a, q)?;
            let occupation = self.occupation_laplace(0.0, a, q)?;
            let inverse_i = 1.0 / self.series.value(q * pow_nonneg(a, self.alpha))?;
            let discrepancy = ((hitting - occupation) / occupation).abs();
            rows.push(CtRow { q, hitting, occupation, inverse_i, discrepancy });
        }
        let max_discrepancy = rows.iter().map(|r| r.discrepancy).fold(0.0, f64::max);
        Ok(CtReport {
            alpha: self.alpha,
            a,
            theta: self.series.theta(),
            rows,
            max_discrepancy,
            tolerance: CT_TOLERANCE,
            pass: max_discrepancy < CT_TOLERANCE,
        })
    }
}

fn alpha_shift(alpha: f64, n: usize) -> f64 {
    alpha * (n + 1) as f64
}

pub const CT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CtRow {
    pub q: f64,
    pub hitting: f64,
    pub occupation: f64,
    pub inverse_i: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CtReport {
    pub alpha: f64,
    pub a: f64,
    pub theta: f64,
    pub rows: Vec<CtRow>,
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Analytic identity check for `ψ` with index `α` at level `a`.
pub fn ct_analytic_verdict(psi: &LevyExponent, alpha: f64, a: f64, q_grid: &[f64]) -> Result<CtReport> {
    OccupationEvaluator::new(psi.clone(), alpha)?.ct_analytic_verdict(a, q_grid)
}
