//! Browser bindings for the interactive demo page.
//!
//! Three operations are exposed, each returning a flat `Float64Array` with a
//! documented row layout so the page can draw without further glue:
//!
//! - [`dbm_paths`]: driver trajectories, rows `[t, lambda_1 .. lambda_n]`.
//! - [`loewner_grid_flow`]: forward images of a grid under the N-driver flow
//!   next to the hydrodynamic flow, rows
//!   `[re_z0, im_z0, re_gN, im_gN, re_gInf, im_gInf, alive]`.
//! - [`local_law_profile`]: `M_t^N` against `M_t^infty` along a horizontal
//!   line, rows `[x, re_MN, im_MN, re_Minf, im_Minf]`.

use wasm_bindgen::prelude::wasm_bindgen;

use msle_core::dbm::{sample_spectrum_matrix, simulate_path_matrix, Beta};
use msle_core::experiments::uniform_times;
use msle_core::loewner::{integrate_flow_infty, integrate_flow_n};
use msle_core::stieltjes::{m_infty_delta0, m_n, GridG};
use msle_core::SeededRng;
use num_complex::Complex64;

fn beta_from(beta: u8) -> Beta {
    if beta == 2 {
        Beta::Two
    } else {
        Beta::One
    }
}

/// Sample one Dyson Brownian motion driver path from the origin.
///
/// Returns `(steps + 1)` rows of `1 + n` values: the time, then the ordered
/// particle positions.
#[wasm_bindgen]
pub fn dbm_paths(n: usize, beta: u8, seed: u64, steps: usize, t_max: f64) -> Vec<f64> {
    let n = n.clamp(1, 512);
    let steps = steps.clamp(1, 2048);
    let t_max = if t_max.is_finite() && t_max > 0.0 {
        t_max
    } else {
        1.0
    };
    let times = uniform_times(t_max, steps);
    let mut rng = SeededRng::new(seed, 0);
    let path =
        simulate_path_matrix(n, &times, beta_from(beta), &mut rng).expect("valid path parameters");
    let mut out = Vec::with_capacity(times.len() * (n + 1));
    for cfg in path.configs() {
        out.push(cfg.time());
        out.extend_from_slice(cfg.positions());
    }
    out
}

/// Evolve an `nx x ny` grid to time `t` under both flows.
///
/// Rows hold the seed point, its image under the N-driver flow, its image
/// under the hydrodynamic flow, and an alive flag (1.0 while un-swallowed in
/// both flows).
#[wasm_bindgen]
pub fn loewner_grid_flow(n: usize, beta: u8, seed: u64, t: f64, nx: usize, ny: usize) -> Vec<f64> {
    let n = n.clamp(1, 512);
    let nx = nx.clamp(2, 64);
    let ny = ny.clamp(2, 64);
    let t = if t.is_finite() && t > 0.0 {
        t.min(1.0)
    } else {
        0.2
    };
    let im_top = 2.0 * t.sqrt();
    // Start slightly above the real axis so hull growth is visible, and span
    // a band wide enough to show the distortion decay.
    let grid = GridG::new(
        (-3.0, 3.0),
        (0.05 * im_top.max(0.2), im_top + 2.0),
        (nx, ny),
    )
    .expect("valid demo grid");
    let knots = 64.max((n as f64).powf(2.0 / 3.0).ceil() as usize);
    let times = uniform_times(t, knots);
    let mut rng = SeededRng::new(seed, 0);
    let path =
        simulate_path_matrix(n, &times, beta_from(beta), &mut rng).expect("valid path parameters");
    let flow_n = integrate_flow_n(&path, &grid, t, 1e-7).expect("flow integrates");
    let flow_inf = integrate_flow_infty(&grid, &times, 1e-7).expect("flow integrates");
    let last = times.len() - 1;
    let mut out = Vec::with_capacity(grid.len() * 7);
    for (pi, z0) in grid.points().enumerate() {
        let gn = flow_n.values[last][pi];
        let gi = flow_inf.values[last][pi];
        let alive = flow_n.alive[last][pi] && flow_inf.alive[last][pi];
        out.extend_from_slice(&[
            z0.re,
            z0.im,
            gn.re,
            gn.im,
            gi.re,
            gi.im,
            f64::from(u8::from(alive)),
        ]);
    }
    out
}

/// Compare the empirical transform with the hydrodynamic limit along the line
/// `Im z = y`, `Re z` in `[-span, span]`.
#[wasm_bindgen]
pub fn local_law_profile(n: usize, beta: u8, seed: u64, t: f64, y: f64, points: usize) -> Vec<f64> {
    let n = n.clamp(1, 4000);
    let points = points.clamp(8, 512);
    let t = if t.is_finite() && t >= 0.0 {
        t.min(4.0)
    } else {
        1.0
    };
    let y = if y.is_finite() && y > 0.05 { y } else { 1.0 };
    let span = 3.0 + 4.0 * t.sqrt();
    let mut rng = SeededRng::new(seed, 0);
    let cfg =
        sample_spectrum_matrix(n, t, beta_from(beta), &mut rng).expect("valid sampler parameters");
    let mut out = Vec::with_capacity(points * 5);
    for k in 0..points {
        let x = -span + 2.0 * span * k as f64 / (points - 1) as f64;
        let z = Complex64::new(x, y);
        let mn = m_n(&cfg, z);
        let mi = m_infty_delta0(z, t);
        out.extend_from_slice(&[x, mn.re, mn.im, mi.re, mi.im]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dbm_paths_layout() {
        let n = 8;
        let steps = 16;
        let out = dbm_paths(n, 1, 7, steps, 1.0);
        assert_eq!(out.len(), (steps + 1) * (n + 1));
        // Row times increase and positions are sorted within each row.
        for r in 0..=steps {
            let row = &out[r * (n + 1)..(r + 1) * (n + 1)];
            assert!(row[1..].windows(2).all(|w| w[0] <= w[1]));
        }
        assert_eq!(out[0], 0.0);
        let last_t = out[steps * (n + 1)];
        assert!((last_t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dbm_paths_deterministic() {
        let a = dbm_paths(6, 2, 42, 8, 0.5);
        let b = dbm_paths(6, 2, 42, 8, 0.5);
        assert_eq!(a, b);
    }

    #[test]
    fn grid_flow_layout_and_flags() {
        let out = loewner_grid_flow(32, 1, 3, 0.2, 8, 6);
        assert_eq!(out.len(), 8 * 6 * 7);
        for row in out.chunks(7) {
            assert!(row[6] == 0.0 || row[6] == 1.0);
            if row[6] == 1.0 {
                // Alive points stay in the upper half-plane.
                assert!(row[3] > 0.0 && row[5] > 0.0);
            }
        }
        // High rows should survive.
        let alive = out.chunks(7).filter(|r| r[6] == 1.0).count();
        assert!(alive > 8 * 6 / 2, "too few alive points: {alive}");
    }

    #[test]
    fn profile_matches_limit_for_large_n() {
        let out = local_law_profile(1000, 1, 5, 1.0, 1.5, 64);
        assert_eq!(out.len(), 64 * 5);
        let mut worst = 0.0f64;
        for row in out.chunks(5) {
            let d = ((row[1] - row[3]).powi(2) + (row[2] - row[4]).powi(2)).sqrt();
            worst = worst.max(d);
        }
        assert!(worst < 0.1, "profile deviates by {worst}");
    }
}
