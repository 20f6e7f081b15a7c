//! Dyson Brownian motion driver paths started at the origin, sampled by two
//! independent routes: the matrix model (eigenvalues of `-2 sqrt(t) A`) and a
//! direct interacting-particle SDE with calibrated coefficients.
//!
//! Both routes expose the same marginal law; the sampler-equivalence
//! experiment in [`crate::experiments`] checks exactly that.

mod matrix_route;
mod sde_route;
mod stats;

pub use matrix_route::{sample_spectrum_matrix, simulate_path_matrix};
pub use sde_route::{simulate_path_sde, simulate_path_sde_from};
pub use stats::{extreme_particle_stat, holder_estimate, ExtremeStat, HolderEstimate};

use std::io::Write;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
pub use crate::numerics::matrix::Beta;

/// Ordered particle positions at one time.
#[derive(Debug, Clone)]
pub struct ParticleConfig {
    time: f64,
    positions: Vec<f64>,
}

impl ParticleConfig {
    /// Wrap positions, sorting them ascending. Sampled configurations are
    /// strictly increasing for `t > 0` almost surely; injected synthetic
    /// configurations (used as oracles) may carry ties.
    pub fn new(time: f64, mut positions: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidDimension(
                "empty particle configuration".into(),
            ));
        }
        if !(time >= 0.0) {
            return Err(Error::Configuration(format!("negative time {time}")));
        }
        positions.sort_unstable_by(f64::total_cmp);
        Ok(Self { time, positions })
    }

    /// Strict ordering holds for almost-sure samples at positive time.
    pub fn is_strictly_ordered(&self) -> bool {
        self.positions.windows(2).all(|w| w[0] < w[1])
    }

    pub fn at_origin(time: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("need n >= 1 particles".into()));
        }
        Ok(Self {
            time,
            positions: vec![0.0; n],
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Largest particle modulus.
    pub fn max_abs(&self) -> f64 {
        self.positions.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_sorted(&self) -> bool {
        self.positions.windows(2).all(|w| w[0] <= w[1])
    }
}

/// A driver path: one ordered configuration per time on an increasing grid.
#[derive(Debug, Clone)]
pub struct DbmPath {
    times: Vec<f64>,
    configs: Vec<ParticleConfig>,
    beta: Beta,
    origin_start: bool,
}

impl DbmPath {
    /// Assemble a path from configurations, validating the grid.
    pub fn from_configs(configs: Vec<ParticleConfig>, beta: Beta) -> Result<Self> {
        if configs.is_empty() {
            return Err(Error::Configuration("empty time grid".into()));
        }
        let times: Vec<f64> = configs.iter().map(|c| c.time).collect();
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Configuration(
                "path times must be strictly increasing".into(),
            ));
        }
        let n = configs[0].n();
        if configs.iter().any(|c| c.n() != n) {
            return Err(Error::InvalidDimension(
                "particle count changes along the path".into(),
            ));
        }
        let origin_start = times[0] == 0.0 && configs[0].positions.iter().all(|&x| x == 0.0);
        Ok(Self {
            times,
            configs,
            beta,
            origin_start,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn configs(&self) -> &[ParticleConfig] {
        &self.configs
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    pub fn n(&self) -> usize {
        self.configs[0].n()
    }

    pub fn origin_start(&self) -> bool {
        self.origin_start
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("non-empty path")
    }

    /// Driver positions at time `t`, linearly interpolated between knots and
    /// clamped to the ends of the grid.
    pub fn interpolate_into(&self, t: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.n());
        let times = &self.times;
        if t <= times[0] {
            out.copy_from_slice(&self.configs[0].positions);
            return;
        }
        if t >= *times.last().unwrap() {
            out.copy_from_slice(&self.configs.last().unwrap().positions);
            return;
        }
        let k = match times.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(k) => {
                out.copy_from_slice(&self.configs[k].positions);
                return;
            }
            Err(k) => k,
        };
        let (t0, t1) = (times[k - 1], times[k]);
        let w = (t - t0) / (t1 - t0);
        let a = &self.configs[k - 1].positions;
        let b = &self.configs[k].positions;
        for i in 0..out.len() {
            out[i] = a[i] + w * (b[i] - a[i]);
        }
    }

    /// Fraction of steps violating the continuity proxy
    /// `max_i |d lambda| <= 10 sqrt(dt) (1 + log N)`.
    pub fn continuity_violation_fraction(&self) -> f64 {
        if self.times.len() < 2 {
            return 0.0;
        }
        let n = self.n() as f64;
        let bound_scale = 10.0 * (1.0 + n.ln());
        let mut bad = 0usize;
        for k in 1..self.times.len() {
            let dt = self.times[k] - self.times[k - 1];
            let bound = bound_scale * dt.sqrt();
            let a = &self.configs[k - 1].positions;
            let b = &self.configs[k].positions;
            let max_inc = a
                .iter()
                .zip(b.iter())
                .fold(0.0f64, |m, (x, y)| m.max((y - x).abs()));
            if max_inc > bound {
                bad += 1;
            }
        }
        bad as f64 / (self.times.len() - 1) as f64
    }

    /// Export as CSV with header `t,i,lambda`, one row per (time, particle).
    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "t,i,lambda")?;
        for config in &self.configs {
            for (i, lam) in config.positions.iter().enumerate() {
                writeln!(w, "{},{},{}", fmt_f64(config.time), i, fmt_f64(*lam))?;
            }
        }
        Ok(())
    }
}

/// Noise scale of the calibrated SDE: `2 sqrt(2) / sqrt(beta N)`.
pub fn sde_noise_scale(beta: Beta, n: usize) -> f64 {
    2.0 * (2.0f64).sqrt() / (beta.value() * n as f64).sqrt()
}
