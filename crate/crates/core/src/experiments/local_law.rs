//! Local-law style experiments on the empirical Stieltjes transform.

use num_complex::Complex64;

use crate::dbm::{sample_spectrum_matrix, simulate_path_matrix, Beta};
use crate::error::Result;
use crate::experiments::{net_knots, uniform_times, ErrorSample};
use crate::parallel::map_trials;
use crate::rng::SeededRng;
use crate::stieltjes::{m_infty_delta0, m_n, GridG};

fn region_label(grid: &GridG) -> String {
    format!(
        "[{},{}]x[{},{}] {}x{}",
        grid.re_min, grid.re_max, grid.im_min, grid.im_max, grid.n_re, grid.n_im
    )
}

/// Per-trial `sup_{z in grid} |M_t^N(z) - M_t^infty(z)|` with the spectrum
/// drawn from the matrix model at fixed `t`.
pub fn local_law_error(
    n: usize,
    t: f64,
    grid: &GridG,
    trials: usize,
    beta: Beta,
    seed: u64,
    stream_block: u64,
) -> Result<Vec<ErrorSample>> {
    let label = region_label(grid);
    let limits: Vec<Complex64> = grid.points().map(|z| m_infty_delta0(z, t)).collect();
    let results: Vec<Result<ErrorSample>> = map_trials(trials, |trial| {
        let mut rng = SeededRng::new(seed, stream_block + trial as u64);
        let config = sample_spectrum_matrix(n, t, beta, &mut rng)?;
        let mut sup = 0.0f64;
        for (z, m_inf) in grid.points().zip(limits.iter()) {
            sup = sup.max((m_n(&config, z) - m_inf).norm());
        }
        Ok(ErrorSample {
            n,
            trial,
            sup_error: sup,
            param: t,
            region: label.clone(),
        })
    });
    results.into_iter().collect()
}

/// Outcome of one time-uniform trial.
#[derive(Debug, Clone)]
pub struct TimeUniformSample {
    pub sample: ErrorSample,
    /// Number of net intervals used over `[0, T]`.
    pub knots: usize,
}

/// Simulate one matrix-route path with knots on the `ceil(mult n^(2/3))` net
/// and take the sup over knots and grid of `|M^N - M^infty|`.
pub fn time_uniform_error(
    n: usize,
    t_horizon: f64,
    grid: &GridG,
    net_multiplier: f64,
    beta: Beta,
    seed: u64,
    stream: u64,
) -> Result<TimeUniformSample> {
    let knots = net_knots(n, net_multiplier).max(1);
    let times = uniform_times(t_horizon, knots);
    let mut rng = SeededRng::new(seed, stream);
    let path = simulate_path_matrix(n, &times, beta, &mut rng)?;
    let sup = time_uniform_sup(&path, grid);
    Ok(TimeUniformSample {
        sample: ErrorSample {
            n,
            trial: stream as usize,
            sup_error: sup,
            param: t_horizon,
            region: region_label(grid),
        },
        knots,
    })
}

/// Sup over recorded knots and grid points of `|M^N - M^infty|` for any path
/// (also used with injected paths as a deterministic regression value).
pub fn time_uniform_sup(path: &crate::dbm::DbmPath, grid: &GridG) -> f64 {
    let mut sup = 0.0f64;
    for config in path.configs() {
        let t = config.time();
        for z in grid.points() {
            let diff = (m_n(config, z) - m_infty_delta0(z, t)).norm();
            sup = sup.max(diff);
        }
    }
    sup
}

/// Concentration statistics of `M_t^N(z)` across trials at fixed `(n, t, z)`.
#[derive(Debug, Clone)]
pub struct ConcentrationStat {
    pub n: usize,
    pub t: f64,
    pub z: Complex64,
    pub mean: Complex64,
    /// Sample standard deviation `sqrt(sum |M - mean|^2 / (trials - 1))`.
    pub sd: f64,
    pub trials: usize,
}

pub fn concentration_error(
    n: usize,
    t: f64,
    z: Complex64,
    trials: usize,
    beta: Beta,
    seed: u64,
    stream_block: u64,
) -> Result<ConcentrationStat> {
    let values: Vec<Result<Complex64>> = map_trials(trials, |trial| {
        let mut rng = SeededRng::new(seed, stream_block + trial as u64);
        let config = sample_spectrum_matrix(n, t, beta, &mut rng)?;
        Ok(m_n(&config, z))
    });
    let values: Vec<Complex64> = values.into_iter().collect::<Result<_>>()?;
    let mean = values.iter().sum::<Complex64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>()
        / (values.len().max(2) - 1) as f64;
    Ok(ConcentrationStat {
        n,
        t,
        z,
        mean,
        sd: var.sqrt(),
        trials,
    })
}
