//! Analytic and Monte Carlo tools for hitting and occupation times of
//! spectrally negative positive self-similar Markov processes.

// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod exponent;
pub mod numerics;
pub mod montecarlo;
pub mod occupation;
pub mod presets;
pub mod scale;
pub mod series;
pub mod specials;

pub use error::{Error, ErrorClass, Result};
pub use exponent::{Component, LevyExponent, RationalForm, Wrapper};
pub use presets::Preset;
