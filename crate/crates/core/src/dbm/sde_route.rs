//! Interacting-particle SDE route.
//!
//! Calibrated to match the matrix model `-2 sqrt(t) A` in distribution:
//!
//! ```text
//! d lambda_i = (2 sqrt(2) / sqrt(beta N)) dB_i + (4 / N) sum_{j != i} dt / (lambda_i - lambda_j)
//! ```
//!
//! The drift is repulsive and singular, so the integrator guards every step:
//! the substep size is keyed to the smallest gap, a rejected step is refined
//! by Brownian-bridge splitting (the drawn increment is preserved, only the
//! path through it is resolved more finely), and the all-zero start is left
//! through one exact matrix-marginal step.

use crate::dbm::matrix_route::sample_spectrum_matrix;
use crate::dbm::{sde_noise_scale, Beta, DbmPath, ParticleConfig};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Substep halving floor relative to `dt_max`.
const FLOOR_SHIFT: i32 = 20;
/// Bridge-split recursion depth. Deeper than the halving floor: near-collision
/// clusters need the extra resolution for the repulsive kick to stay below
/// the neighbouring gaps.
const MAX_DEPTH: usize = 24;
/// Redraw attempts at the refinement floor before declaring a stiff region.
const FLOOR_REDRAWS: usize = 64;
/// A gap below this after the refinement floor is a collision.
const COLLISION_GAP: f64 = 1e-12;
/// Candidate steps may not compress any gap below this scale. It sits far
/// under every statistically visible gap (bulk spacings are ~1e-3) but far
/// above the zone where an explicit Euler kick `dt * (4/N) / gap` overshoots
/// the neighbours; refinement turns near-collisions around here instead.
const SOFT_GAP: f64 = 1e-7;

/// Simulate a DBM path from the origin. `times` must be strictly increasing;
/// internal substeps never exceed `dt_max`.
pub fn simulate_path_sde(
    n: usize,
    times: &[f64],
    beta: Beta,
    rng: &mut SeededRng,
    dt_max: f64,
) -> Result<DbmPath> {
    if n == 0 {
        return Err(Error::InvalidDimension("need n >= 1 particles".into()));
    }
    if times.is_empty() {
        return Err(Error::Configuration("empty time grid".into()));
    }
    if !times.windows(2).all(|w| w[0] < w[1]) || times[0] < 0.0 {
        return Err(Error::Configuration(
            "times must be strictly increasing and >= 0".into(),
        ));
    }
    if !(dt_max > 0.0) {
        return Err(Error::Configuration(format!(
            "dt_max must be positive, got {dt_max}"
        )));
    }

    let mut configs = Vec::with_capacity(times.len());
    let mut idx = 0;
    if times[0] == 0.0 {
        configs.push(ParticleConfig::at_origin(0.0, n)?);
        idx = 1;
    }
    if idx == times.len() {
        return DbmPath::from_configs(configs, beta);
    }

    // Leave the singular all-zero configuration with one exact marginal step.
    let first_target = times[idx];
    let h0 = dt_max.min(first_target);
    let start = sample_spectrum_matrix(n, h0, beta, rng)?;
    let mut state = Integrator::new(n, beta, dt_max, start.positions().to_vec(), h0);
    for &target in &times[idx..] {
        state.advance_to(target, rng)?;
        configs.push(ParticleConfig::new(target, state.positions.clone())?);
    }
    DbmPath::from_configs(configs, beta)
}

/// Same integrator from an arbitrary ordered start (no origin escape step).
pub fn simulate_path_sde_from(
    initial: &ParticleConfig,
    times: &[f64],
    beta: Beta,
    rng: &mut SeededRng,
    dt_max: f64,
) -> Result<DbmPath> {
    if times.is_empty() {
        return Err(Error::Configuration("empty time grid".into()));
    }
    if !times.windows(2).all(|w| w[0] < w[1]) || times[0] < initial.time() {
        return Err(Error::Configuration(
            "times must be strictly increasing and start after the initial time".into(),
        ));
    }
    let mut state = Integrator::new(
        initial.n(),
        beta,
        dt_max,
        initial.positions().to_vec(),
        initial.time(),
    );
    let mut configs = Vec::with_capacity(times.len());
    for &target in times {
        state.advance_to(target, rng)?;
        configs.push(ParticleConfig::new(target, state.positions.clone())?);
    }
    DbmPath::from_configs(configs, beta)
}

struct Integrator {
    n: usize,
    sigma: f64,
    drift_coeff: f64,
    dt_max: f64,
    dt_floor: f64,
    positions: Vec<f64>,
    t: f64,
}

impl Integrator {
    fn new(n: usize, beta: Beta, dt_max: f64, positions: Vec<f64>, t: f64) -> Self {
        Self {
            n,
            sigma: sde_noise_scale(beta, n),
            drift_coeff: 4.0 / n as f64,
            dt_max,
            dt_floor: dt_max * (2.0f64).powi(-FLOOR_SHIFT),
            positions,
            t,
        }
    }

    fn min_gap(&self) -> f64 {
        self.positions
            .windows(2)
            .fold(f64::INFINITY, |m, w| m.min(w[1] - w[0]))
    }

    fn advance_to(&mut self, target: f64, rng: &mut SeededRng) -> Result<()> {
        while self.t < target {
            let mut dt = self.dt_max.min(target - self.t);
            // Halve until the noise scale fits inside the smallest gap.
            let gap = self.min_gap();
            if gap.is_finite() {
                while gap < self.sigma * dt.sqrt() && dt > self.dt_floor {
                    dt *= 0.5;
                }
                if dt <= self.dt_floor && gap < COLLISION_GAP {
                    let (i, j) = self.tightest_pair();
                    return Err(Error::StiffRegion {
                        t: self.t,
                        i,
                        j,
                        gap,
                    });
                }
                dt = dt.max(self.dt_floor.min(target - self.t));
            }
            let noise: Vec<f64> = (0..self.n)
                .map(|_| rng.normal(self.sigma * dt.sqrt()))
                .collect();
            self.step(dt, &noise, 0, rng)?;
        }
        Ok(())
    }

    fn tightest_pair(&self) -> (usize, usize) {
        let mut best = (0usize, 1usize.min(self.n - 1));
        let mut best_gap = f64::INFINITY;
        for i in 0..self.n.saturating_sub(1) {
            let g = self.positions[i + 1] - self.positions[i];
            if g < best_gap {
                best_gap = g;
                best = (i, i + 1);
            }
        }
        best
    }

    /// One guarded Euler step consuming the given Brownian increments. On an
    /// ordering violation the increment is split with a Brownian bridge and
    /// both halves are retried at the finer scale.
    fn step(&mut self, dt: f64, noise: &[f64], depth: usize, rng: &mut SeededRng) -> Result<()> {
        let candidate = self.euler_candidate(dt, noise);
        if is_strictly_ordered(&candidate) {
            self.positions = candidate;
            self.t += dt;
            return Ok(());
        }
        if depth < MAX_DEPTH {
            // Midpoint of a Brownian increment W over dt: W/2 + N(0, dt/4).
            let half_sd = self.sigma * (dt * 0.25).sqrt();
            let first: Vec<f64> = noise
                .iter()
                .map(|w| 0.5 * w + rng.normal(half_sd))
                .collect();
            let second: Vec<f64> = noise.iter().zip(first.iter()).map(|(w, a)| w - a).collect();
            self.step(0.5 * dt, &first, depth + 1, rng)?;
            return self.step(0.5 * dt, &second, depth + 1, rng);
        }
        // Refinement floor: resample the local increment a bounded number of
        // times; a persistent violation is a genuine stiff region.
        let sd = self.sigma * dt.sqrt();
        for _ in 0..FLOOR_REDRAWS {
            let fresh: Vec<f64> = (0..self.n).map(|_| rng.normal(sd)).collect();
            let candidate = self.euler_candidate(dt, &fresh);
            if is_strictly_ordered(&candidate) {
                self.positions = candidate;
                self.t += dt;
                return Ok(());
            }
        }
        let (i, j) = self.tightest_pair();
        let gap = self.positions[j] - self.positions[i];
        Err(Error::StiffRegion {
            t: self.t,
            i,
            j,
            gap,
        })
    }

    fn euler_candidate(&self, dt: f64, noise: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut drift = vec![0.0; n];
        for i in 0..n {
            let xi = self.positions[i];
            for j in (i + 1)..n {
                let inv = 1.0 / (xi - self.positions[j]);
                drift[i] += inv;
                drift[j] -= inv;
            }
        }
        let c = self.drift_coeff * dt;
        (0..n)
            .map(|i| self.positions[i] + c * drift[i] + noise[i])
            .collect()
    }
}

fn is_strictly_ordered(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] - w[0] > SOFT_GAP)
}
