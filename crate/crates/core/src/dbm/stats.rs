//! Extreme-particle and path-regularity statistics.

use crate::dbm::DbmPath;
use crate::error::{Error, Result};
use crate::numerics::stats::linear_fit;

/// Extreme-particle modulus along a path.
#[derive(Debug, Clone)]
pub struct ExtremeStat {
    /// `lambda*(t) = max_i |lambda_t^i|` per recorded time.
    pub lambda_star: Vec<f64>,
    /// Supremum of `lambda*` over the recorded times.
    pub sup_over_time: f64,
}

/// Check the extreme-particle bound `lambda*(t) <= lambda*(0) + sqrt(t) (C + x)`
/// at every recorded time. Returns the statistics and whether the bound held
/// throughout.
pub fn extreme_particle_stat(path: &DbmPath, c: f64, x: f64) -> (ExtremeStat, bool) {
    let lambda_star: Vec<f64> = path.configs().iter().map(|cfg| cfg.max_abs()).collect();
    let sup = lambda_star.iter().fold(0.0f64, |m, v| m.max(*v));
    let base = if path.origin_start() {
        0.0
    } else {
        lambda_star[0]
    };
    let budget = c + x;
    let holds = path
        .times()
        .iter()
        .zip(lambda_star.iter())
        .all(|(&t, &ls)| ls <= base + t.max(0.0).sqrt() * budget + 1e-12);
    (
        ExtremeStat {
            lambda_star,
            sup_over_time: sup,
        },
        holds,
    )
}

/// Hoelder-exponent estimate of a path on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HolderEstimate {
    /// All increments vanished (constant path).
    Undefined,
    /// Least-squares slope of `log max-increment` against `log lag`.
    Exponent(f64),
}

/// Fit the regularity exponent from dyadic lags: for each lag `2^k` the
/// statistic is the largest particle increment over that lag anywhere on the
/// path.
pub fn holder_estimate(path: &DbmPath) -> Result<HolderEstimate> {
    let times = path.times();
    let k = times.len();
    if k < 32 {
        return Err(Error::Configuration(format!(
            "Hoelder estimate needs >= 32 time points, got {k}"
        )));
    }
    let dt = times[1] - times[0];
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.max(1e-300));
    if !uniform {
        return Err(Error::Configuration(
            "Hoelder estimate needs a uniform (dyadic) grid".into(),
        ));
    }

    let n = path.n();
    let mut lags = Vec::new();
    let mut lag = 1usize;
    while lag <= (k - 1) / 4 {
        lags.push(lag);
        lag *= 2;
    }
    if lags.len() < 2 {
        return Err(Error::Configuration(
            "grid too short for dyadic lags".into(),
        ));
    }

    let mut xs = Vec::with_capacity(lags.len());
    let mut ys = Vec::with_capacity(lags.len());
    for &lag in &lags {
        let mut max_inc = 0.0f64;
        for k0 in 0..(k - lag) {
            let a = path.configs()[k0].positions();
            let b = path.configs()[k0 + lag].positions();
            for i in 0..n {
                max_inc = max_inc.max((b[i] - a[i]).abs());
            }
        }
        if max_inc == 0.0 {
            return Ok(HolderEstimate::Undefined);
        }
        xs.push((lag as f64 * dt).ln());
        ys.push(max_inc.ln());
    }
    let fit = linear_fit(&xs, &ys)?;
    Ok(HolderEstimate::Exponent(fit.slope))
}
