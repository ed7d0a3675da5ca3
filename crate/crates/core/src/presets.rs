//! Named exponent families: `bessel:ν`, `killed-bessel:ν,κ`, `stable:α`,
//! `tee-stable:α,β` and `sawtooth:γ,κ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{Component, LevyExponent};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Preset {
    /// `u²/2 + (ν/2 - 1) u`
    Bessel { nu: f64 },
    /// Bessel exponent minus κ.
    KilledBessel { nu: f64, kappa: f64 },
    /// `Γ(u+1)/Γ(u+1-α)`
    Stable { alpha: f64 },
    /// `T_β` applied to the stable exponent.
    TeeStable { alpha: f64, beta: f64 },
    /// `u (u + γ - 2)/(u + γ + κ - 2)`
    Sawtooth { gamma: f64, kappa: f64 },
}

fn constraint(msg: String) -> Error {
    Error::Constraint(msg)
}

impl Preset {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Preset::Bessel { nu } => {
                if !(nu > 0.0 && nu.is_finite()) {
                    return Err(constraint(format!("bessel requires ν > 0, got ν = {nu}")));
                }
            }
            Preset::KilledBessel { nu, kappa } => {
                if !(nu > 0.0 && nu.is_finite()) {
                    return Err(constraint(format!("killed-bessel requires ν > 0, got ν = {nu}")));
                }
                if !(kappa > 0.0 && kappa < nu) {
                    return Err(constraint(format!("killed-bessel requires 0 < κ < ν, got κ = {kappa}, ν = {nu}")));
                }
            }
            Preset::Stable { alpha } => check_stable_index(alpha)?,
            Preset::TeeStable { alpha, beta } => {
                check_stable_index(alpha)?;
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(constraint(format!("tee-stable requires β > 0, got β = {beta}")));
                }
            }
            Preset::Sawtooth { gamma, kappa } => {
                let ok = gamma.is_finite()
                    && kappa.is_finite()
                    && ((gamma >= 2.0 && kappa > 0.0)
                        || (gamma > 2.0 - kappa && gamma < 2.0 && kappa > 0.0 && kappa < 1.0));
                if !ok {
                    return Err(constraint(format!(
                        "sawtooth requires either γ ≥ 2 and κ > 0, or γ in (2-κ, 2) with κ < 1; got γ = {gamma}, κ = {kappa}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn exponent(&self) -> Result<LevyExponent> {
        self.validate()?;
        match *self {
            Preset::Bessel { nu } => LevyExponent::quadratic(1.0, nu / 2.0 - 1.0),
            Preset::KilledBessel { nu, kappa } => LevyExponent::new(vec![
                Component::Quadratic { sigma2: 1.0, drift: nu / 2.0 - 1.0 },
                Component::Killing { q: kappa },
            ]),
            Preset::Stable { alpha } => LevyExponent::new(vec![Component::Pochhammer { scale: 1.0, index: alpha }]),
            Preset::TeeStable { alpha, beta } => {
                LevyExponent::new(vec![Component::Pochhammer { scale: 1.0, index: alpha }])?.tee_transform(beta)
            }
            Preset::Sawtooth { gamma, kappa } => LevyExponent::new(vec![
                Component::Quadratic { sigma2: 0.0, drift: 1.0 },
                Component::CpExpJumps { rate: kappa, jump_scale: gamma + kappa - 2.0 },
            ]),
        }
    }

    /// Self-similarity index used with this family when none is given.
    pub fn natural_index(&self) -> f64 {
        match *self {
            Preset::Bessel { .. } | Preset::KilledBessel { .. } => 2.0,
            Preset::Stable { alpha } | Preset::TeeStable { alpha, .. } => alpha,
            Preset::Sawtooth { .. } => 1.0,
        }
    }

    /// Roots `θ±` of the killed Bessel exponent, `None` for other families.
    pub fn killed_bessel_roots(&self) -> Option<(f64, f64)> {
        match *self {
            Preset::KilledBessel { nu, kappa } => {
                let m = nu / 2.0 - 1.0;
                let d = (m * m + 2.0 * kappa).sqrt();
                Some((-m + d, -m - d))
            }
            _ => None,
        }
    }
}

fn check_stable_index(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(constraint(format!("stable families require 1 < α < 2, got α = {alpha}")))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Preset::Bessel { nu } => write!(f, "bessel:{nu}"),
            Preset::KilledBessel { nu, kappa } => write!(f, "killed-bessel:{nu},{kappa}"),
            Preset::Stable { alpha } => write!(f, "stable:{alpha}"),
            Preset::TeeStable { alpha, beta } => write!(f, "tee-stable:{alpha},{beta}"),
            Preset::Sawtooth { gamma, kappa } => write!(f, "sawtooth:{gamma},{kappa}"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("preset '{s}' is missing ':' and parameters")))?;
        let params: Vec<f64> = args
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad preset parameter '{p}' in '{s}'")))
            })
            .collect::<Result<_>>()?;
        let want = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("preset '{name}' takes {n} parameter(s), got {}", params.len())))
            }
        };
        let preset = match name.trim() {
            "bessel" => {
                want(1)?;
                Preset::Bessel { nu: params[0] }
            }
            "killed-bessel" => {
                want(2)?;
                Preset::KilledBessel { nu: params[0], kappa: params[1] }
            }
            "stable" => {
                want(1)?;
                Preset::Stable { alpha: params[0] }
            }
            "tee-stable" => {
                want(2)?;
                Preset::TeeStable { alpha: params[0], beta: params[1] }
            }
            "sawtooth" => {
                want(2)?;
                Preset::Sawtooth { gamma: params[0], kappa: params[1] }
            }
            other => return Err(Error::InvalidArgument(format!("unknown preset family '{other}'"))),
        };
        preset.validate()?;
        Ok(preset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["bessel:3", "killed-bessel:3,1", "stable:1.5", "tee-stable:1.5,0.5", "sawtooth:3,1"] {
            let p: Preset = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
            p.exponent().unwrap();
        }
    }

    #[test]
    fn constraints_are_named() {
        let e = "killed-bessel:1,2".parse::<Preset>().unwrap_err();
        assert!(e.to_string().contains("κ < ν"));
        assert!(matches!("stable:2.5".parse::<Preset>(), Err(Error::Constraint(_))));
        assert!("sawtooth:1.5,0.8".parse::<Preset>().is_ok());
        assert!("sawtooth:1.5,1.2".parse::<Preset>().is_err());
        assert!("sawtooth:1.0,0.5".parse::<Preset>().is_err());
        assert!(matches!("bessel".parse::<Preset>(), Err(Error::InvalidArgument(_))));
        assert!("bessel:1,2".parse::<Preset>().is_err());
        assert!("levy:1".parse::<Preset>().is_err());
    }

    #[test]
    fn killed_bessel_roots_solve_exponent() {
        let p: Preset = "killed-bessel:3,1".parse().unwrap();
        let (tp, tm) = p.killed_bessel_roots().unwrap();
        let psi = |u: f64| 0.5 * u * u + 0.5 * u - 1.0;
        assert!(psi(tp).abs() < 1e-14 && psi(tm).abs() < 1e-14);
        assert!((p.exponent().unwrap().largest_root().unwrap() - tp).abs() < 1e-11);
    }

    #[test]
    fn sawtooth_shape() {
        let e = Preset::Sawtooth { gamma: 3.0, kappa: 1.0 }.exponent().unwrap();
        for u in [0.5, 1.0, 4.0] {
            let direct = u * (u + 1.0) / (u + 2.0);
            assert!((e.evaluate(u).unwrap() - direct).abs() < 1e-15);
        }
    }
}
