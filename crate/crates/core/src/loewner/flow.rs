//! Adaptive Cash-Karp integration of the N-driver Loewner flow
//! `dg/dt = (1/N) sum_i 2 / (g - lambda_i(t))` and of the hydrodynamic flow
//! `dg/dt = M_t^infty(g)`.
//!
//! Points are independent; each carries its own step size. A point is marked
//! swallowed (and never extrapolated) when it approaches a driver to within
//! the machine-scale guard, leaves the upper half-plane, or its step size
//! underflows near the hull.

use num_complex::Complex64;

use crate::dbm::DbmPath;
use crate::error::{Error, Result};
use crate::stieltjes::{m_infty_delta0, GridG};

/// Step-size underflow bound: below this the point counts as swallowed.
const H_MIN: f64 = 1e-12;

/// Trajectories of a family of seed points under a Loewner-type flow, stored
/// at a shared increasing list of times.
#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub seeds: Vec<Complex64>,
    pub times: Vec<f64>,
    /// `values[time_index][point_index]`; frozen at the last live value once a
    /// point is swallowed.
    pub values: Vec<Vec<Complex64>>,
    pub alive: Vec<Vec<bool>>,
    pub swallowed_at: Vec<Option<f64>>,
}

impl FlowTrajectory {
    pub fn final_values(&self) -> &[Complex64] {
        self.values.last().expect("non-empty trajectory")
    }

    pub fn final_alive(&self) -> &[bool] {
        self.alive.last().expect("non-empty trajectory")
    }

    pub fn swallowed_count(&self) -> usize {
        self.swallowed_at.iter().filter(|s| s.is_some()).count()
    }
}

/// Integrate the N-driver flow over the path's time span (clipped to `t_max`),
/// storing states at the path knot times. Driver values between knots are
/// linear interpolants, so integration steps never cross a knot.
pub fn integrate_flow_n(
    path: &DbmPath,
    grid: &GridG,
    t_max: f64,
    tol: f64,
) -> Result<FlowTrajectory> {
    let store_times: Vec<f64> = path
        .times()
        .iter()
        .copied()
        .filter(|&t| t <= t_max + 1e-15)
        .collect();
    if store_times.is_empty() {
        return Err(Error::Configuration(
            "path has no knots inside [0, t_max]".into(),
        ));
    }
    let n = path.n();
    let guard = 10.0 * f64::EPSILON * n as f64;
    let knots = path.times().to_vec();
    integrate(
        grid,
        &store_times,
        tol,
        guard * guard,
        |t, g| driver_velocity(path, t, g),
        |t, h| {
            // Cap the step at the next knot strictly ahead of t.
            let idx = knots.partition_point(|&k| k <= t + 1e-14);
            if idx < knots.len() {
                h.min(knots[idx] - t)
            } else {
                h
            }
        },
    )
}

/// Integrate the hydrodynamic flow `dg/dt = M_t^infty(g)` on the grid,
/// storing at the given times.
pub fn integrate_flow_infty(grid: &GridG, store_times: &[f64], tol: f64) -> Result<FlowTrajectory> {
    if store_times.is_empty() {
        return Err(Error::Configuration("empty store-time list".into()));
    }
    integrate(
        grid,
        store_times,
        tol,
        0.0,
        |t, g| {
            if g.im <= 0.0 {
                None
            } else {
                Some((m_infty_delta0(g, t), f64::INFINITY))
            }
        },
        |_t, h| h,
    )
}

/// Velocity of the N-driver flow plus the squared distance to the nearest
/// driver. `None` when the point left the half-plane.
fn driver_velocity(path: &DbmPath, t: f64, g: Complex64) -> Option<(Complex64, f64)> {
    if g.im <= 0.0 {
        return None;
    }
    let knots = path.times();
    let n = path.n();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut min_d2 = f64::INFINITY;
    let mut add = |lam: f64| {
        let d = Complex64::new(g.re - lam, g.im);
        let d2 = d.norm_sqr();
        min_d2 = min_d2.min(d2);
        let inv = 2.0 / d2;
        acc += Complex64::new(d.re * inv, -d.im * inv);
    };
    if t <= knots[0] {
        for &lam in path.configs()[0].positions() {
            add(lam);
        }
    } else if t >= *knots.last().unwrap() {
        for &lam in path.configs().last().unwrap().positions() {
            add(lam);
        }
    } else {
        let k = knots.partition_point(|&kt| kt < t);
        let (t0, t1) = (knots[k - 1], knots[k]);
        let w = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let a = path.configs()[k - 1].positions();
        let b = path.configs()[k].positions();
        for i in 0..n {
            add(a[i] + w * (b[i] - a[i]));
        }
    }
    Some((acc / n as f64, min_d2))
}

/// Cash-Karp embedded Runge-Kutta 4(5) tableau.
const CK_A: [f64; 5] = [0.2, 0.3, 0.6, 1.0, 0.875];
const CK_B: [[f64; 5]; 5] = [
    [0.2, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
    [0.3, -0.9, 1.2, 0.0, 0.0],
    [-11.0 / 54.0, 2.5, -70.0 / 27.0, 35.0 / 27.0, 0.0],
    [
        1631.0 / 55296.0,
        175.0 / 512.0,
        575.0 / 13824.0,
        44275.0 / 110592.0,
        253.0 / 4096.0,
    ],
];
const CK_C5: [f64; 6] = [
    37.0 / 378.0,
    0.0,
    250.0 / 621.0,
    125.0 / 594.0,
    0.0,
    512.0 / 1771.0,
];
const CK_C4: [f64; 6] = [
    2825.0 / 27648.0,
    0.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    0.25,
];

/// Per-point adaptive integration. `velocity(t, g)` yields the field value and
/// the squared distance to the nearest singularity (compared against
/// `proximity2` for the swallow guard); `step_cap(t, h)` trims proposed steps
/// at breakpoints of the field.
fn integrate<V, C>(
    grid: &GridG,
    store_times: &[f64],
    tol: f64,
    proximity2: f64,
    velocity: V,
    step_cap: C,
) -> Result<FlowTrajectory>
where
    V: Fn(f64, Complex64) -> Option<(Complex64, f64)>,
    C: Fn(f64, f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::Configuration(
            "integrator tolerance must be positive".into(),
        ));
    }
    if !store_times.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Configuration(
            "store times must be strictly increasing".into(),
        ));
    }
    let seeds: Vec<Complex64> = grid.points().collect();
    let np = seeds.len();
    let nt = store_times.len();
    let t_start = store_times[0];
    let mut values = vec![vec![Complex64::new(0.0, 0.0); np]; nt];
    let mut alive = vec![vec![true; np]; nt];
    let mut swallowed_at = vec![None; np];

    for (pi, &z0) in seeds.iter().enumerate() {
        let mut g = z0;
        let mut t = t_start;
        values[0][pi] = g;
        let mut h_try: f64 = 1e-3;
        let mut dead = false;
        'times: for ti in 1..nt {
            let target = store_times[ti];
            while !dead && target - t > 1e-14 {
                let (k1, min_d2) = match velocity(t, g) {
                    Some(v) => v,
                    None => {
                        dead = true;
                        swallowed_at[pi] = Some(t);
                        break;
                    }
                };
                if min_d2 <= proximity2 || h_try < H_MIN {
                    dead = true;
                    swallowed_at[pi] = Some(t);
                    break;
                }
                let mut h = step_cap(t, h_try.min(target - t));
                let mut k = [Complex64::new(0.0, 0.0); 6];
                k[0] = k1;
                let mut accepted = false;
                while h >= H_MIN * 1e-3 {
                    let mut stages_ok = true;
                    for s in 1..6 {
                        let mut gs = g;
                        for (j, kj) in k.iter().enumerate().take(s) {
                            gs += h * CK_B[s - 1][j] * kj;
                        }
                        match velocity(t + CK_A[s - 1] * h, gs) {
                            Some((v, _)) => k[s] = v,
                            None => {
                                stages_ok = false;
                                break;
                            }
                        }
                    }
                    if stages_ok {
                        let mut g5 = g;
                        let mut g4 = g;
                        for s in 0..6 {
                            g5 += h * CK_C5[s] * k[s];
                            g4 += h * CK_C4[s] * k[s];
                        }
                        let err = (g5 - g4).norm();
                        if err <= tol {
                            g = g5;
                            t += h;
                            let grow = if err == 0.0 {
                                5.0
                            } else {
                                (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
                            };
                            h_try = (h * grow).max(H_MIN * 0.5);
                            accepted = true;
                            break;
                        }
                        h *= (0.9 * (tol / err).powf(0.25)).clamp(0.1, 0.9);
                    } else {
                        h *= 0.5;
                    }
                }
                if !accepted || g.im <= 0.0 {
                    dead = true;
                    swallowed_at[pi] = Some(t);
                    break;
                }
                // Hull-exclusion invariant for upper half-plane Loewner fields:
                // Im(g)^2 >= Im(z0)^2 - 4 (t - t_start), up to tolerance.
                debug_assert!(
                    g.im * g.im >= z0.im * z0.im - 4.0 * (t - t_start) - 1e-6,
                    "imaginary-part bound violated at t = {t}: z0 = {z0}, g = {g}"
                );
            }
            values[ti][pi] = g;
            alive[ti][pi] = !dead;
            if dead {
                for tj in (ti + 1)..nt {
                    values[tj][pi] = g;
                    alive[tj][pi] = false;
                }
                break 'times;
            }
        }
    }
    Ok(FlowTrajectory {
        seeds,
        times: store_times.to_vec(),
        values,
        alive,
        swallowed_at,
    })
}
