//! Map-convergence experiments: `sup |g^N - g^infty|` over the evaluation
//! region and the Groenwall envelope consistency check.

use crate::dbm::{simulate_path_matrix, Beta};
use crate::error::{Error, Result};
use crate::experiments::{net_knots, uniform_times, ErrorSample};
use crate::loewner::{integrate_flow_infty, integrate_flow_n, EvaluationRegion};
use crate::parallel::map_trials;
use crate::rng::SeededRng;
use crate::stieltjes::{m_infty_delta0, m_n};

/// Per-trial map-convergence data.
#[derive(Debug, Clone)]
pub struct MapConvergence {
    pub samples: Vec<ErrorSample>,
    /// Fraction of (trial, grid-point) pairs swallowed in either flow.
    pub swallowed_fraction: f64,
}

/// For each trial: simulate a matrix-route path on the time net, integrate
/// both flows on the shared grid, and take the sup of `|g^N - g^infty|` over
/// stored times and co-alive points. Trials with more than 5% swallowed
/// points abort with a region-too-close error.
pub fn map_convergence_error(
    n: usize,
    t_horizon: f64,
    region: &EvaluationRegion,
    trials: usize,
    tol: f64,
    net_multiplier: f64,
    beta: Beta,
    seed: u64,
    stream_block: u64,
) -> Result<MapConvergence> {
    let knots = net_knots(n, net_multiplier).max(1);
    let times = uniform_times(t_horizon, knots);
    let grid = &region.grid;
    let label = format!("region im_min {} re_bound {}", grid.im_min, region.re_bound);
    let flow_inf = integrate_flow_infty(grid, &times, tol)?;
    let results: Vec<Result<(ErrorSample, usize)>> = map_trials(trials, |trial| {
        let mut rng = SeededRng::new(seed, stream_block + trial as u64);
        let path = simulate_path_matrix(n, &times, beta, &mut rng)?;
        let flow_n = integrate_flow_n(&path, grid, t_horizon, tol)?;
        let total = grid.len();
        let mut swallowed = 0usize;
        for pi in 0..total {
            if flow_n.swallowed_at[pi].is_some() || flow_inf.swallowed_at[pi].is_some() {
                swallowed += 1;
            }
        }
        if swallowed * 20 > total {
            return Err(Error::RegionTooClose { swallowed, total });
        }
        let mut sup = 0.0f64;
        for ti in 0..times.len() {
            for pi in 0..total {
                if flow_n.alive[ti][pi] && flow_inf.alive[ti][pi] {
                    sup = sup.max((flow_n.values[ti][pi] - flow_inf.values[ti][pi]).norm());
                }
            }
        }
        Ok((
            ErrorSample {
                n,
                trial,
                sup_error: sup,
                param: t_horizon,
                region: label.clone(),
            },
            swallowed,
        ))
    });
    let mut samples = Vec::with_capacity(trials);
    let mut swallowed_total = 0usize;
    for r in results {
        let (sample, swallowed) = r?;
        samples.push(sample);
        swallowed_total += swallowed;
    }
    let swallowed_fraction = swallowed_total as f64 / (trials * grid.len()) as f64;
    Ok(MapConvergence {
        samples,
        swallowed_fraction,
    })
}

/// Groenwall envelope transferring a velocity-field error into a flow-map
/// error over horizon `T` at image-strip height `eta`:
/// `map_error <= sup_m_error * T * exp(2 T / eta^2)`.
pub fn gronwall_envelope(sup_m_error: f64, t_horizon: f64, eta: f64) -> f64 {
    sup_m_error * t_horizon * (2.0 * t_horizon / (eta * eta)).exp()
}

/// Envelope check outcome across trials.
#[derive(Debug, Clone)]
pub struct GronwallCheck {
    pub holds: Vec<bool>,
    pub fraction: f64,
    /// Per-trial `(map_error, envelope)` pairs.
    pub detail: Vec<(f64, f64)>,
}

/// Verify per trial that the realized final map error stays below the
/// envelope built from the realized sup Stieltjes error along the N-flow
/// trajectory.
pub fn gronwall_bound_check(
    n: usize,
    t_horizon: f64,
    region: &EvaluationRegion,
    trials: usize,
    tol: f64,
    net_multiplier: f64,
    beta: Beta,
    seed: u64,
    stream_block: u64,
) -> Result<GronwallCheck> {
    let knots = net_knots(n, net_multiplier).max(1);
    let times = uniform_times(t_horizon, knots);
    let grid = &region.grid;
    let eta = region.image_im_lower;
    if !(eta > 0.0) {
        return Err(Error::Configuration(
            "image strip touches the real axis; enlarge the margin".into(),
        ));
    }
    let flow_inf = integrate_flow_infty(grid, &times, tol)?;
    let results: Vec<Result<(bool, f64, f64)>> = map_trials(trials, |trial| {
        let mut rng = SeededRng::new(seed, stream_block + trial as u64);
        let path = simulate_path_matrix(n, &times, beta, &mut rng)?;
        let flow_n = integrate_flow_n(&path, grid, t_horizon, tol)?;
        // Realized sup of the velocity-field error along the N-trajectory.
        let mut sup_m_err = 0.0f64;
        for (ti, config) in path.configs().iter().enumerate() {
            let t = config.time();
            for pi in 0..grid.len() {
                if flow_n.alive[ti][pi] {
                    let g = flow_n.values[ti][pi];
                    if g.im > 0.0 {
                        let diff = (m_n(config, g) - m_infty_delta0(g, t)).norm();
                        sup_m_err = sup_m_err.max(diff);
                    }
                }
            }
        }
        // Final-time map error over co-alive points.
        let last = times.len() - 1;
        let mut map_err = 0.0f64;
        for pi in 0..grid.len() {
            if flow_n.alive[last][pi] && flow_inf.alive[last][pi] {
                map_err = map_err.max((flow_n.values[last][pi] - flow_inf.values[last][pi]).norm());
            }
        }
        let envelope = gronwall_envelope(sup_m_err, t_horizon, eta);
        Ok((map_err <= envelope + 1e-12, map_err, envelope))
    });
    let mut holds = Vec::with_capacity(trials);
    let mut detail = Vec::with_capacity(trials);
    for r in results {
        let (ok, map_err, envelope) = r?;
        holds.push(ok);
        detail.push((map_err, envelope));
    }
    let fraction = holds.iter().filter(|&&b| b).count() as f64 / holds.len().max(1) as f64;
    Ok(GronwallCheck {
        holds,
        fraction,
        detail,
    })
}
