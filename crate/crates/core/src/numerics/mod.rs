//! Numerical building blocks shared by the analytic modules.

pub mod gamma;
pub mod quad;
pub mod roots;
pub mod sum;

pub use gamma::{gamma, gamma_ratio, ln_gamma, ln_gamma_ratio, ln_pochhammer, pochhammer, recip_gamma};
pub use quad::{integrate, Quadrature};
pub use sum::{compensated_sum, CompensatedSum};

/// x^p for x >= 0 through exp(p ln x), with 0^p = 0 for p > 0.
#[inline]
pub fn pow_nonneg(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        if p == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (p * x.ln()).exp()
    }
}
