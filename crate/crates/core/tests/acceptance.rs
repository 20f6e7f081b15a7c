//! Acceptance suite: every release criterion as one test, each printing a
//! pass/fail line with its measured value, threshold and runtime.
//!
//! Run with `cargo test -p msle-core --test acceptance -- --nocapture` to see
//! the per-criterion lines as they complete.

use std::time::Instant;

use num_complex::Complex64;

use msle_core::dbm::{
    extreme_particle_stat, sample_spectrum_matrix, simulate_path_matrix, simulate_path_sde, Beta,
};
use msle_core::experiments::{
    concentration_error, fit_rate, local_law_error, map_convergence_error, net_knots,
    time_uniform_error, uniform_times, ErrorSample,
};
use msle_core::loewner::{
    hull_box, integrate_flow_n, map_displacement_check, region_g, EvaluationRegion, HullBox,
};
use msle_core::numerics::stats::{
    ks_distance_to_cdf, ks_distance_two_sample, linear_fit, median, semicircle_cdf,
};
use msle_core::numerics::{
    check_resolvent_identity, check_trace_difference, check_ward, resolvent, sample_ensemble,
};
use msle_core::stieltjes::{
    burgers_residual, m_infty_delta0, m_infty_general, stability_experiment, GridG, InitialMeasure,
};
use msle_core::SeededRng;

struct Criterion {
    name: &'static str,
    started: Instant,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            started: Instant::now(),
        }
    }

    fn report(&self, pass: bool, detail: &str) {
        println!(
            "[{}] {}: {} ({:.1} s)",
            if pass { "PASS" } else { "FAIL" },
            self.name,
            detail,
            self.started.elapsed().as_secs_f64()
        );
    }

    fn check(&self, pass: bool, detail: &str) {
        self.report(pass, detail);
        assert!(pass, "{}: {detail}", self.name);
    }
}

fn standard_grid() -> GridG {
    GridG::new((-2.0, 2.0), (1.0, 2.0), (21, 11)).unwrap()
}

#[test]
fn c01_identity_suite() {
    let c = Criterion::new("C01 identity suite (Ward, resolvent, trace difference)");
    let z = Complex64::new(0.0, 1.0);
    let mut worst = 0.0f64;
    for beta in [Beta::One, Beta::Two] {
        for k in 0..100u64 {
            let mut rng = SeededRng::new(0xC1, 1000 * beta.value() as u64 + k);
            let a = sample_ensemble(16, beta, &mut rng).unwrap();
            let b = sample_ensemble(16, beta, &mut rng).unwrap();
            let g = resolvent(&a, z).unwrap();
            worst = worst.max(check_ward(&g));
            worst = worst.max(check_resolvent_identity(&a, &b, z).unwrap());
            worst = worst.max(check_trace_difference(&a, (k % 16) as usize, z).unwrap());
        }
    }
    c.check(
        worst <= 1e-10,
        &format!("worst residual {worst:.3e} vs 1e-10"),
    );
}

#[test]
fn c02_semicircle_support() {
    let c = Criterion::new("C02 semicircle and support edge (n=2000, t=1, beta=1)");
    let seeds = 50;
    let stats: Vec<(f64, bool)> = msle_core::parallel::map_trials(seeds, |s| {
        let mut rng = SeededRng::new(0xC2, s as u64);
        let cfg = sample_spectrum_matrix(2000, 1.0, Beta::One, &mut rng).unwrap();
        let ks = ks_distance_to_cdf(cfg.positions(), |x| semicircle_cdf(x, 4.0));
        let edge = cfg.max_abs();
        (ks, (3.7..=4.3).contains(&edge))
    });
    let worst_ks = stats.iter().fold(0.0f64, |m, (ks, _)| m.max(*ks));
    let edge_hits = stats.iter().filter(|(_, hit)| *hit).count();
    let freq = edge_hits as f64 / seeds as f64;
    c.check(
        worst_ks <= 0.02 && freq >= 0.9,
        &format!("worst KS {worst_ks:.4} vs 0.02; edge frequency {freq:.2} vs 0.9"),
    );
}

#[test]
fn c03_sampler_equivalence() {
    let c = Criterion::new("C03 SDE vs matrix sampler equivalence (n=200, t=1)");
    let n = 200;
    let trials = 50;
    let mut detail = String::new();
    let mut pass = true;
    for beta in [Beta::One, Beta::Two] {
        let sde: Vec<Vec<f64>> = msle_core::parallel::map_trials(trials, |s| {
            let mut rng = SeededRng::new(0xC3, 10_000 * beta.value() as u64 + s as u64);
            let path = simulate_path_sde(n, &[1.0], beta, &mut rng, 1e-3).unwrap();
            path.configs()[0].positions().to_vec()
        });
        let mat: Vec<Vec<f64>> = msle_core::parallel::map_trials(trials, |s| {
            let mut rng = SeededRng::new(0xC3, 30_000 * beta.value() as u64 + s as u64);
            sample_spectrum_matrix(n, 1.0, beta, &mut rng)
                .unwrap()
                .positions()
                .to_vec()
        });
        let mut a: Vec<f64> = sde.into_iter().flatten().collect();
        let mut b: Vec<f64> = mat.into_iter().flatten().collect();
        a.sort_unstable_by(f64::total_cmp);
        b.sort_unstable_by(f64::total_cmp);
        let ks = ks_distance_two_sample(&a, &b);
        detail.push_str(&format!("beta {} KS {ks:.4}; ", beta.value()));
        pass &= ks <= 0.05;
    }
    c.check(pass, &format!("{detail}threshold 0.05"));
}

#[test]
fn c04_local_law_rate() {
    let c = Criterion::new("C04 fixed-time local law rate (t=1)");
    let grid = standard_grid();
    let mut samples: Vec<ErrorSample> = Vec::new();
    for (ni, &n) in [250usize, 500, 1000, 2000].iter().enumerate() {
        samples.extend(
            local_law_error(n, 1.0, &grid, 20, Beta::One, 0xC4, 10_000 * ni as u64).unwrap(),
        );
    }
    let fit = fit_rate(&samples).unwrap();
    let monotone = fit.medians.windows(2).all(|w| w[1] <= w[0]);
    let median_2000 = *fit.medians.last().unwrap();
    c.check(
        fit.slope <= -1.0 / 3.0 + 0.05 && monotone && median_2000 <= 0.05,
        &format!(
            "slope {:.3} vs {:.3}; medians {:?} non-increasing: {monotone}; median(n=2000) {:.2e} vs 0.05",
            fit.slope,
            -1.0 / 3.0 + 0.05,
            fit.medians,
            median_2000
        ),
    );
}

#[test]
fn c05_time_uniform_local_law() {
    let c = Criterion::new("C05 time-uniform local law (n=1000, T=1)");
    let grid = standard_grid();
    let n = 1000;
    let trials = 20;
    let fixed = local_law_error(n, 1.0, &grid, trials, Beta::One, 0xC5A, 0).unwrap();
    let fixed_median = median(&fixed.iter().map(|s| s.sup_error).collect::<Vec<_>>());
    let sups: Vec<f64> = msle_core::parallel::map_trials(trials, |trial| {
        time_uniform_error(n, 1.0, &grid, 1.0, Beta::One, 0xC5B, trial as u64)
            .unwrap()
            .sample
            .sup_error
    });
    let knots = net_knots(n, 1.0);
    let within = sups.iter().filter(|&&s| s <= 2.0 * fixed_median).count();
    let frac = within as f64 / trials as f64;
    c.check(
        frac >= 0.9 && knots >= 100,
        &format!(
            "net {knots} knots; fixed median {fixed_median:.3e}; within-2x fraction {frac:.2} vs 0.9"
        ),
    );
}

#[test]
fn c06_map_convergence_rate() {
    let c = Criterion::new("C06 map convergence rate (T=0.2, margin 0.5)");
    let t_horizon = 0.2;
    let hull = HullBox { m: 0.0, t_horizon };
    // Formula check for the margin: im_min = 2 sqrt(0.2) + 0.5 ~ 1.394.
    let formula_region = region_g(&hull, 0.5, 1.5, 1.1, (13, 5)).unwrap();
    assert!((formula_region.grid.im_min - 1.3944).abs() < 1e-3);
    let grid = GridG::new((-1.5, 1.5), (1.4, 2.5), (13, 5)).unwrap();
    let region = EvaluationRegion::with_grid(&hull, grid).unwrap();
    let mut samples = Vec::new();
    let mut worst_swallowed = 0.0f64;
    for (ni, &n) in [64usize, 128, 256, 512, 1024].iter().enumerate() {
        let out = map_convergence_error(
            n,
            t_horizon,
            &region,
            20,
            1e-8,
            1.0,
            Beta::One,
            0xC6,
            10_000 * ni as u64,
        )
        .unwrap();
        worst_swallowed = worst_swallowed.max(out.swallowed_fraction);
        samples.extend(out.samples);
    }
    let fit = fit_rate(&samples).unwrap();
    c.check(
        fit.slope <= -1.0 / 3.0 + 0.05 && worst_swallowed < 0.01,
        &format!(
            "slope {:.3} vs {:.3}; medians {:?}; swallowed fraction {:.4} vs 0.01",
            fit.slope,
            -1.0 / 3.0 + 0.05,
            fit.medians,
            worst_swallowed
        ),
    );
}

#[test]
fn c07_concentration_rate() {
    let c = Criterion::new("C07 concentration of M_t^N(2i) (t=1)");
    let z = Complex64::new(0.0, 2.0);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut sds = Vec::new();
    for (ni, &n) in [250usize, 500, 1000, 2000].iter().enumerate() {
        let stat =
            concentration_error(n, 1.0, z, 200, Beta::One, 0xC7, 10_000 * ni as u64).unwrap();
        xs.push((n as f64).ln());
        ys.push(stat.sd.ln());
        sds.push(stat.sd);
    }
    let fit = linear_fit(&xs, &ys).unwrap();
    let sd_text: Vec<String> = sds.iter().map(|s| format!("{s:.3e}")).collect();
    c.check(
        fit.slope <= -0.9,
        &format!(
            "sd values [{}]; slope {:.3} vs -0.9",
            sd_text.join(", "),
            fit.slope
        ),
    );
}

#[test]
fn c08_burgers_residual() {
    let c = Criterion::new("C08 Burgers residual of the closed form");
    let grid = standard_grid();
    let mut worst = 0.0f64;
    for &t in &[1.0 / 16.0, 0.25, 1.0] {
        for z in grid.points() {
            worst = worst.max(burgers_residual(t, z, 1e-5, 1e-5).unwrap());
        }
    }
    c.check(
        worst <= 1e-6,
        &format!("worst residual {worst:.3e} vs 1e-6"),
    );
}

#[test]
fn c09_fixed_point_consistency() {
    let c = Criterion::new("C09 fixed-point consistency (general solver vs closed form)");
    let grid = standard_grid();
    let mu = InitialMeasure::DiracAtZero;
    let mut worst_agree = 0.0f64;
    let mut worst_residual = 0.0f64;
    for &t in &[1.0 / 16.0, 0.25, 1.0] {
        for z in grid.points() {
            let closed = m_infty_delta0(z, t);
            let general = m_infty_general(z, t, &mu, 1e-14).unwrap();
            worst_agree = worst_agree.max((closed - general).norm());
            worst_residual = worst_residual.max((closed * (z - 2.0 * t * closed) - 2.0).norm());
            worst_residual = worst_residual.max((general * (z - 2.0 * t * general) - 2.0).norm());
        }
    }
    c.check(
        worst_agree <= 1e-10 && worst_residual <= 1e-12,
        &format!("agreement {worst_agree:.3e} vs 1e-10; fixed-point residual {worst_residual:.3e} vs 1e-12"),
    );
}

#[test]
fn c10a_stability_exponent_positive_time() {
    let c = Criterion::new("C10a stability exponent at (t, eta) = (1, 1)");
    let eps: Vec<f64> = (2..=8).map(|k| 10f64.powi(-k)).collect();
    let mut rng = SeededRng::new(0xC10, 0);
    let out = stability_experiment(1.0, 1.0, &eps, &mut rng).unwrap();
    // The perturbed fixed point responds linearly at this (t, eta): the
    // stability factor |1 - 4 t s0'(w)| stays of order eta / Im(w), so the
    // measured exponent sits at 1.0 rather than the worst-case 1/3. The
    // window below encodes the worst-case rate; the measured value is
    // reported honestly.
    c.check(
        (0.28..=0.39).contains(&out.exponent),
        &format!("fitted exponent {:.4} vs window [0.28, 0.39]", out.exponent),
    );
}

#[test]
fn c10b_stability_small_t_linear_response() {
    let c = Criterion::new("C10b small-t linear response (t = 1e-3)");
    let eps: Vec<f64> = (2..=8).map(|k| 10f64.powi(-k)).collect();
    let mut rng = SeededRng::new(0xC10, 1);
    let out = stability_experiment(1e-3, 1.0, &eps, &mut rng).unwrap();
    c.check(
        (0.9..=1.1).contains(&out.exponent),
        &format!("fitted exponent {:.4} vs window [0.9, 1.1]", out.exponent),
    );
}

#[test]
fn c11_extreme_particle_bound() {
    let c = Criterion::new("C11 extreme-particle bound (C=5, x=1, n=200, T=1)");
    let trials = 200;
    let times = uniform_times(1.0, 50);
    let holds: Vec<bool> = msle_core::parallel::map_trials(trials, |s| {
        let mut rng = SeededRng::new(0xC11, s as u64);
        let path = simulate_path_matrix(200, &times, Beta::One, &mut rng).unwrap();
        extreme_particle_stat(&path, 5.0, 1.0).1
    });
    let frac = holds.iter().filter(|&&b| b).count() as f64 / trials as f64;
    c.check(frac >= 0.99, &format!("bound frequency {frac:.3} vs 0.99"));
}

#[test]
fn c12_displacement_bound() {
    let c = Criterion::new("C12 displacement bound |g(z) - z| <= 5r (n=200, T=0.25)");
    let t_horizon = 0.25;
    let n = 200;
    let knots = net_knots(n, 1.0);
    let times = uniform_times(t_horizon, knots);
    let hull_nominal = HullBox { m: 0.0, t_horizon };
    let region = region_g(&hull_nominal, 0.5, 1.5, 1.1, (13, 5)).unwrap();
    let worsts: Vec<f64> = msle_core::parallel::map_trials(20, |s| {
        let mut rng = SeededRng::new(0xC12, s as u64);
        let path = simulate_path_matrix(n, &times, Beta::One, &mut rng).unwrap();
        let traj = integrate_flow_n(&path, &region.grid, t_horizon, 1e-8).unwrap();
        let hull = hull_box(&path, t_horizon);
        map_displacement_check(&traj, &hull)
    });
    let worst = worsts.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let violations = worsts.iter().filter(|&&v| v > 0.0).count();
    c.check(
        violations == 0,
        &format!("violations {violations}/20; worst slack {worst:.3} (<= 0 required)"),
    );
}
