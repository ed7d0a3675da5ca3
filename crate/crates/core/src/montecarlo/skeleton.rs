use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::Serialize;

use super::config::{SimConfig, SimulableProcess};
use crate::error::Result;

/// RNG for one path: the master seed picks the key, the path index the stream.
pub fn path_rng(master_seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(path_index);
    rng
}

/// Draws the increments of ξ cell by cell. The Gaussian part and the jumps
/// are returned separately; jumps are applied at the end of the cell.
pub(crate) struct Stepper<'a> {
    process: &'a SimulableProcess,
    h: f64,
    drift_h: f64,
    sd: f64,
    until_jump: f64,
    pub(crate) rng: ChaCha8Rng,
}

impl<'a> Stepper<'a> {
    pub(crate) fn new(process: &'a SimulableProcess, h: f64, mut rng: ChaCha8Rng) -> Self {
        let until_jump = if process.jump_rate > 0.0 {
            rng.sample::<f64, _>(Exp1) / process.jump_rate
        } else {
            f64::INFINITY
        };
        Self { process, h, drift_h: process.drift * h, sd: (process.sigma2 * h).sqrt(), until_jump, rng }
    }

    #[inline]
    pub(crate) fn diffusive(&mut self) -> f64 {
        if self.sd > 0.0 {
            let z: f64 = self.rng.sample(StandardNormal);
            self.drift_h + self.sd * z
        } else {
            self.drift_h
        }
    }

    /// Sum of the (negative) jumps arriving in the current cell.
    #[inline]
    pub(crate) fn jumps(&mut self) -> f64 {
        self.until_jump -= self.h;
        if self.until_jump > 0.0 {
            return 0.0;
        }
        let mut total = 0.0;
        while self.until_jump <= 0.0 {
            total -= self.jump_size();
            self.until_jump += self.rng.sample::<f64, _>(Exp1) / self.process.jump_rate;
        }
        total
    }

    fn jump_size(&mut self) -> f64 {
        let jumps = &self.process.jumps;
        let rho = if jumps.len() == 1 {
            jumps[0].1
        } else {
            let u: f64 = self.rng.random();
            jumps.iter().find(|(cum, _)| u < *cum).unwrap_or(&jumps[jumps.len() - 1]).1
        };
        self.rng.sample::<f64, _>(Exp1) / rho
    }

    #[inline]
    pub(crate) fn uniform(&mut self) -> f64 {
        self.rng.random()
    }
}

/// ξ on the grid `0, h, 2h, …` up to the Lévy-time horizon, started at 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skeleton {
    pub h: f64,
    /// ξ at the grid points, after any jumps of the preceding cell.
    pub values: Vec<f64>,
    /// ξ at the end of each cell before that cell's jumps.
    pub pre_jump: Vec<f64>,
    pub jump_count: usize,
}

pub fn simulate_levy_skeleton(cfg: &SimConfig, path_index: u64) -> Result<Skeleton> {
    let process = cfg.validate()?;
    let steps = (cfg.s_max / cfg.h).round() as usize;
    let mut stepper = Stepper::new(&process, cfg.h, path_rng(cfg.master_seed, path_index));
    let mut values = Vec::with_capacity(steps + 1);
    let mut pre_jump = Vec::with_capacity(steps);
    let mut jump_count = 0;
    let mut x = 0.0;
    values.push(x);
    for _ in 0..steps {
        let end = x + stepper.diffusive();
        pre_jump.push(end);
        let j = stepper.jumps();
        if j != 0.0 {
            jump_count += 1;
        }
        x = end + j;
        values.push(x);
    }
    Ok(Skeleton { h: cfg.h, values, pre_jump, jump_count })
}
