//! Subcommand implementations: each runs one acceptance cluster, writes its
//! CSV artifacts plus a JSON summary, and reports pass/fail per criterion.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;

use msle_core::dbm::{
    extreme_particle_stat, sample_spectrum_matrix, simulate_path_matrix, simulate_path_sde, Beta,
};
use msle_core::experiments::{
    concentration_error, fit_rate, gronwall_bound_check, local_law_error, map_convergence_error,
    net_knots, time_uniform_error, uniform_times, write_error_samples_csv, ErrorSample,
};
use msle_core::export::fmt_f64;
use msle_core::loewner::{
    hull_box, integrate_flow_n, map_displacement_check, region_g, write_trajectory_csv, HullBox,
};
use msle_core::numerics::stats::{
    ks_distance_to_cdf, ks_distance_two_sample, median, semicircle_cdf,
};
use msle_core::numerics::{
    check_resolvent_identity, check_trace_difference, check_ward, gaussian_ibp_test,
    quadratic_form_concentration_test, resolvent, sample_ensemble,
};
use msle_core::stieltjes::{
    burgers_residual, m_infty_delta0, m_infty_general, stability_experiment, write_grid_csv,
    GridG, InitialMeasure,
};
use msle_core::parallel::map_trials;
use msle_core::SeededRng;

use crate::config::RunConfig;
use crate::summary::RunSummary;

pub enum RunError {
    Io(String),
    Compute(String),
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

impl From<msle_core::Error> for RunError {
    fn from(e: msle_core::Error) -> Self {
        RunError::Compute(e.to_string())
    }
}

pub type RunResult = Result<RunSummary, RunError>;

fn grid_from_config(config: &RunConfig) -> Result<GridG, RunError> {
    let (re_min, re_max, im_min, im_max, n_re, n_im) = config.grid;
    GridG::new((re_min, re_max), (im_min, im_max), (n_re, n_im)).map_err(RunError::from)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), RunError> {
    fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
    fs::write(path, contents)?;
    Ok(())
}

fn finalize(
    mut summary: RunSummary,
    started: Instant,
    config: &RunConfig,
) -> Result<RunSummary, RunError> {
    summary.elapsed_seconds = started.elapsed().as_secs_f64();
    let json = summary.to_json().map_err(|e| RunError::Io(e.to_string()))?;
    write_file(&config.output.join("summary.json"), json.as_bytes())?;
    Ok(summary)
}

pub fn run(config: &RunConfig) -> RunResult {
    msle_core::parallel::configure_threads(config.threads);
    match config.subcommand {
        "identities" => run_identities(config),
        "sample" => run_sample(config),
        "locallaw" => run_locallaw(config),
        "timeuniform" => run_timeuniform(config),
        "flow" => run_flow(config),
        "converge" => run_converge(config),
        "concentration" => run_concentration(config),
        "stability" => run_stability(config),
        other => Err(RunError::Compute(format!("unknown subcommand {other}"))),
    }
}

fn run_identities(config: &RunConfig) -> RunResult {
    let started = Instant::now();
    let mut summary = RunSummary::new(config.echo());
    let z = Complex64::new(0.0, 1.0);
    for beta in [Beta::One, Beta::Two] {
        let tag = beta.value() as u8;
        let mut worst_ward = 0.0f64;
        let mut worst_res = 0.0f64;
        let mut worst_trace = 0.0f64;
        for k in 0..100u64 {
            let mut rng = SeededRng::new(config.seed, config.stream_base + 1000 * tag as u64 + k);
            let a = sample_ensemble(16, beta, &mut rng)?;
            let b = sample_ensemble(16, beta, &mut rng)?;
            let g = resolvent(&a, z)?;
            worst_ward = worst_ward.max(check_ward(&g));
            worst_res = worst_res.max(check_resolvent_identity(&a, &b, z)?);
            worst_trace = worst_trace.max(check_trace_difference(&a, (k % 16) as usize, z)?);
        }
        summary.push(
            &format!("ward_beta{tag}"),
            worst_ward <= 1e-10,
            worst_ward,
            1e-10,
        );
        summary.push(
            &format!("resolvent_beta{tag}"),
            worst_res <= 1e-10,
            worst_res,
            1e-10,
        );
        summary.push(
            &format!("trace_diff_beta{tag}"),
            worst_trace <= 1e-10,
            worst_trace,
            1e-10,
        );
    }
    let mut rng = SeededRng::new(config.seed, config.stream_base + 5000);
    let ratio = quadratic_form_concentration_test(20, 10_000, &mut rng)?;
    summary.push("quadratic_form_ratio", ratio <= 1.1, ratio, 1.1);
    for (degree, sigma) in [(0u32, 1.0), (1, 1.0), (3, 2.0)] {
        let check = gaussian_ibp_test(degree, sigma, 50_000, &mut rng)?;
        let se_units = if check.std_error > 0.0 {
            check.residual / check.std_error
        } else {
            0.0
        };
        summary.push(
            &format!("gaussian_ibp_deg{degree}"),
            check.within_three_se(),
            se_units,
            3.0,
        );
    }
    finalize(summary, started, config)
}

fn run_sample(config: &RunConfig) -> RunResult {
    let started = Instant::now();
    let mut summary = RunSummary::new(config.echo());
    let beta = config.beta;
    let t = config.t;
    let n_big = *config.n_list.last().unwrap();
    let n_small = config.n_list[0];
    let radius = 4.0 * t.sqrt();
    let edge_band = (3.7 * t.sqrt(), 4.3 * t.sqrt());

    // Semicircle and support edge across seeds.
    let seeds = config.trials.max(2);
    let stats: Vec<Result<(f64, bool), msle_core::Error>> = map_trials(seeds, |s| {
        let mut rng = SeededRng::new(config.seed, config.stream_base + s as u64);
        let cfg = sample_spectrum_matrix(n_big, t, beta, &mut rng)?;
        let ks = ks_distance_to_cdf(cfg.positions(), |x| semicircle_cdf(x, radius));
        let edge = cfg.max_abs();
        Ok((ks, edge >= edge_band.0 && edge <= edge_band.1))
    });
    let mut worst_ks = 0.0f64;
    let mut edge_hits = 0usize;
    for r in stats {
        let (ks, hit) = r?;
        worst_ks = worst_ks.max(ks);
        edge_hits += usize::from(hit);
    }
    let edge_freq = edge_hits as f64 / seeds as f64;
    summary.push("semicircle_ks", worst_ks <= 0.02, worst_ks, 0.02);
    summary.push("edge_frequency", edge_freq >= 0.9, edge_freq, 0.9);

    // SDE / matrix sampler equivalence, pooled.
    let pools: Vec<Result<(Vec<f64>, Vec<f64>), msle_core::Error>> =
        map_trials(config.trials, |s| {
            let mut rng = SeededRng::new(config.seed, config.stream_base + 10_000 + s as u64);
            let path =
                simulate_path_sde(n_small, &[t.max(1e-6)], beta, &mut rng, config.dt_max)?;
            let mut rng2 = SeededRng::new(config.seed, config.stream_base + 20_000 + s as u64);
            let cfg = sample_spectrum_matrix(n_small, t.max(1e-6), beta, &mut rng2)?;
            Ok((
                path.configs()[0].positions().to_vec(),
                cfg.positions().to_vec(),
            ))
        });
    let mut sde_pool = Vec::new();
    let mut mat_pool = Vec::new();
    for r in pools {
        let (a, b) = r?;
        sde_pool.extend(a);
        mat_pool.extend(b);
    }
    sde_pool.sort_unstable_by(f64::total_cmp);
    mat_pool.sort_unstable_by(f64::total_cmp);
    let ks_eq = ks_distance_two_sample(&sde_pool, &mat_pool);
    summary.push("sampler_equivalence_ks", ks_eq <= 0.05, ks_eq, 0.05);

    // Extreme-particle bound with C = 5, x = 1 across seeded paths.
    let horizon = config.t_horizon.max(t);
    let times = uniform_times(horizon, 50);
    let path_trials = config.trials.max(20);
    let holds: Vec<Result<bool, msle_core::Error>> = map_trials(path_trials, |s| {
        let mut rng = SeededRng::new(config.seed, config.stream_base + 30_000 + s as u64);
        let path = simulate_path_matrix(n_small, &times, beta, &mut rng)?;
        Ok(extreme_particle_stat(&path, 5.0, 1.0).1)
    });
    let mut bound_hits = 0usize;
    for r in holds {
        bound_hits += usize::from(r?);
    }
    let bound_freq = bound_hits as f64 / path_trials as f64;
    summary.push(
        "extreme_particle_bound",
        bound_freq >= 0.99,
        bound_freq,
        0.99,
    );

    // Export one driver path as CSV.
    let mut rng = SeededRng::new(config.seed, config.stream_base + 40_000);
    let path = simulate_path_matrix(n_small, &times, beta, &mut rng)?;
    let mut buf = Vec::new();
    path.write_csv(&mut buf)?;
    write_file(&config.output.join("path.csv"), &buf)?;

    finalize(summary, started, config)
}

fn run_locallaw(config: &RunConfig) -> RunResult {
    let started = Instant::now();
    let mut summary = RunSummary::new(config.echo());
    let grid = grid_from_config(config)?;
    let mut samples: Vec<ErrorSample> = Vec::new();
    for (ni, &n) in config.n_list.iter().enumerate() {
        let block = config.stream_base + 10_000 * ni as u64;
        samples.extend(local_law_error(
            n,
            config.t,
            &grid,
            config.trials,
            config.beta,
            config.seed,
            block,
        )?);
    }
    let mut buf = Vec::new();
    write_error_samples_csv(&samples, &mut buf)?;
    write_file(&config.output.join("locallaw.csv"), &buf)?;

    // Companion artifact: the limit transform on the same grid.
    let limit_values: Vec<num_complex::Complex64> =
        grid.points().map(|z| m_infty_delta0(z, config.t)).collect();
    let mut grid_buf = Vec::new();
    write_grid_csv(&grid, config.t, &limit_values, &mut grid_buf)?;
    write_file(&config.output.join("limit_grid.csv"), &grid_buf)?;

    if config.n_list.len() >= 3 {
        let fit = fit_rate(&samples)?;
        summary.slopes.insert("locallaw".into(), fit.slope);
        summary.push(
            "locallaw_slope",
            fit.slope <= -1.0 / 3.0 + 0.05,
            fit.slope,
            -1.0 / 3.0 + 0.05,
        );
        let mut worst_ratio = 0.0f64;
        for w in fit.medians.windows(2) {
            worst_ratio = worst_ratio.max(w[1] / w[0]);
        }
        summary.push(
            "locallaw_medians_nonincreasing",
            worst_ratio <= 1.0,
            worst_ratio,
            1.0,
        );
    } else {
        let med = median(&samples.iter().map(|s| s.sup_error).collect::<Vec<_>>());
        summary.push("locallaw_median", med.is_finite(), med, f64::INFINITY);
    }
    finalize(summary, started, config)
}

fn run_timeuniform(config: &RunConfig) -> RunResult {
    let started = Instant::now();
    let mut summary = RunSummary::new(config.echo());
    let grid = grid_from_config(config)?;
    let n = *config.n_list.last().unwrap();
    let horizon = config.t_horizon;

    // Fixed-time reference at t = T.
    let fixed = local_law_error(
        n,
        horizon,
        &grid,
        config.trials,
        config.beta,
        config.seed,
        config.stream_base + 50_000,
    )?;
    let fixed_median = median(&fixed.iter().map(|s| s.sup_error).collect::<Vec<_>>());

    let mut samples = Vec::new();
    let mut within = 0usize;
    let mut knots_used = 0usize;
    for trial in 0..config.trials {
        let out = time_uniform_error(
            n,
            horizon,
            &grid,
            config.net_mult,
            config.beta,
            config.seed,
            config.stream_base + trial as u64,
        )?;
        knots_used = out.knots;
        if out.sample.sup_error <= 2.0 * fixed_median {
            within += 1;
        }
        samples.push(ErrorSample {
            trial,
            ..out.sample
        });
    }
    let mut buf = Vec::new();
    write_error_samples_csv(&samples, &mut buf)?;
    write_file(&config.output.join("timeuniform.csv"), &buf)?;

    let frac = within as f64 / config.trials as f64;
    summary.push("timeuniform_within_2x", frac >= 0.9, frac, 0.9);
    let expected_knots = net_knots(n, config.net_mult) as f64;
    summary.push(
        "net_size",
        knots_used as f64 >= expected_knots,
        knots_used as f64,
        expected_knots,
    );
    finalize(summary, started, config)
}

fn run_flow(config: &RunConfig) -> RunResult {
    let started = Instant::now();
    let mut summary = RunSummary::new(config.echo());
    let n = config.n_list[0];
    let horizon = config.t_horizon;
    let nominal = HullBox {
        m: 0.0,
        t_horizon: horizon,
    };
    let region = region_g(&nominal, config.margin, 1.5, 1.1, (13, 5))?;
    let knots = net_knots(n, config.net_mult).max(1);
    let times = uniform_times(horizon, knots);

    let mut worst = f64::NEG_INFINITY;
    let mut swallowed = 0usize;
    for s in 0..config.trials {
        let mut rng = SeededRng::new(config.seed, config.stream_base + s as u64);
        let path = simulate_path_matrix(n, &times, config.beta, &mut rng)?;
        let traj = integrate_flow_n(&path, &region.grid, horizon, config.tol)?;
        let hull = hull_box(&path, horizon);
        worst = worst.max(map_displacement_check(&traj, &hull));
        swallowed += traj.swallowed_count();
        if s == 0 {
            let mut buf = Vec::new();
            write_trajectory_csv(&traj, &mut buf)?;
            write_file(&config.output.join("flow.csv"), &buf)?;
        }
    }
    summary.push("displacement_bound", worst <= 0.0, worst, 0.0);
    summary.push(
        "swallowed_points",
        swallowed as f64 <= 0.0,
        swallowed as f64,
        0.0,
    );
    finalize(summary, started, config)
}

fn run_converge(config: &RunConfig) -> RunResult {
    let started = Instant::now();
    let mut summary = RunSummary::new(config.echo());
    let horizon = config.t_horizon;
    let nominal = HullBox {
        m: 0.0,
        t_horizon: horizon,
    };
    let region = region_g(&nominal, config.margin, 1.5, 1.1, (13, 5))?;

    let mut samples = Vec::new();
    let mut swallowed_fraction = 0.0f64;
    for (ni, &n) in config.n_list.iter().enumerate() {
        let out = map_convergence_error(
            n,
            horizon,
            &region,
            config.trials,
            config.tol,
            config.net_mult,
            config.beta,
            config.seed,
            config.stream_base + 10_000 * ni as u64,
        )?;
        swallowed_fraction = swallowed_fraction.max(out.swallowed_fraction);
        samples.extend(out.samples);
    }
    let mut buf = Vec::new();
    write_error_samples_csv(&samples, &mut buf)?;
    write_file(&config.output.join("converge.csv"), &buf)?;

    if config.n_list.len() >= 3 {
        let fit = fit_rate(&samples)?;
        summary.slopes.insert("converge".into(), fit.slope);
        summary.push(
            "converge_slope",
            fit.slope <= -1.0 / 3.0 + 0.05,
            fit.slope,
            -1.0 / 3.0 + 0.05,
        );
    }
    summary.push(
        "swallowed_fraction",
        swallowed_fraction < 0.01,
        swallowed_fraction,
        0.01,
    );

    // Groenwall envelope at the middle ladder size.
    let mid = config.n_list[config.n_list.len() / 2];
    let check = gronwall_bound_check(
        mid,
        horizon,
        &region,
        config.trials,
        config.tol,
        config.net_mult,
        config.beta,
        config.seed,
        config.stream_base + 90_000,
    )?;
    summary.push(
        "gronwall_envelope",
        check.fraction >= 0.95,
        check.fraction,
        0.95,
    );
    finalize(summary, started, config)
}

fn run_concentration(config: &RunConfig) -> RunResult {
    let started = Instant::now();
    let mut summary = RunSummary::new(config.echo());
    let z = Complex64::new(0.0, 2.0);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut samples = Vec::new();
    for (ni, &n) in config.n_list.iter().enumerate() {
        let stat = concentration_error(
            n,
            config.t,
            z,
            config.trials,
            config.beta,
            config.seed,
            config.stream_base + 10_000 * ni as u64,
        )?;
        xs.push((n as f64).ln());
        ys.push(stat.sd.max(1e-300).ln());
        samples.push(ErrorSample {
            n,
            trial: 0,
            sup_error: stat.sd,
            param: config.t,
            region: format!("z={z}"),
        });
    }
    let mut buf = Vec::new();
    write_error_samples_csv(&samples, &mut buf)?;
    write_file(&config.output.join("concentration.csv"), &buf)?;

    if xs.len() >= 2 {
        let fit = msle_core::numerics::stats::linear_fit(&xs, &ys)
            .map_err(|e| RunError::Compute(e.to_string()))?;
        summary.slopes.insert("concentration".into(), fit.slope);
        summary.push("concentration_slope", fit.slope <= -0.9, fit.slope, -0.9);
    }
    finalize(summary, started, config)
}

fn run_stability(config: &RunConfig) -> RunResult {
    let started = Instant::now();
    let mut summary = RunSummary::new(config.echo());
    let grid = grid_from_config(config)?;

    // Burgers residual of the closed form on the grid. The step 1e-5 balances
    // central-difference truncation against roundoff.
    let mut worst_burgers = 0.0f64;
    for &t in &[1.0 / 16.0, 0.25, 1.0] {
        for z in grid.points() {
            worst_burgers = worst_burgers.max(burgers_residual(t, z, 1e-5, 1e-5)?);
        }
    }
    summary.push(
        "burgers_residual",
        worst_burgers <= 1e-6,
        worst_burgers,
        1e-6,
    );

    // Fixed-point consistency of the general solver against the closed form.
    let mu = InitialMeasure::DiracAtZero;
    let mut worst_agree = 0.0f64;
    let mut worst_fp = 0.0f64;
    for &t in &[1.0 / 16.0, 0.25, 1.0] {
        for z in grid.points() {
            let closed = m_infty_delta0(z, t);
            let general = m_infty_general(z, t, &mu, config.fp_tol)?;
            worst_agree = worst_agree.max((closed - general).norm());
            worst_fp = worst_fp.max((closed * (z - 2.0 * t * closed) - 2.0).norm());
            worst_fp = worst_fp.max((general * (z - 2.0 * t * general) - 2.0).norm());
        }
    }
    summary.push(
        "general_delta0_agreement",
        worst_agree <= 1e-10,
        worst_agree,
        1e-10,
    );
    summary.push("fixed_point_residual", worst_fp <= 1e-12, worst_fp, 1e-12);

    // Perturbation stability exponents.
    let eps: Vec<f64> = (2..=8).map(|k| 10f64.powi(-k)).collect();
    let mut rng = SeededRng::new(config.seed, config.stream_base + 1);
    let positive_t = stability_experiment(1.0, 1.0, &eps, &mut rng)?;
    summary
        .slopes
        .insert("stability_exponent_t1".into(), positive_t.exponent);
    summary.push(
        "stability_exponent_t1",
        (0.28..=0.39).contains(&positive_t.exponent),
        positive_t.exponent,
        0.39,
    );
    let mut rng2 = SeededRng::new(config.seed, config.stream_base + 2);
    let small_t = stability_experiment(1e-3, 1.0, &eps, &mut rng2)?;
    summary
        .slopes
        .insert("stability_exponent_small_t".into(), small_t.exponent);
    summary.push(
        "stability_small_t_linear",
        (0.9..=1.1).contains(&small_t.exponent),
        small_t.exponent,
        1.1,
    );

    // CSV of measured (eps, diff) pairs for both regimes.
    let mut buf = Vec::new();
    writeln!(&mut buf, "regime,eps,diff")?;
    for (e, d) in &positive_t.samples {
        writeln!(&mut buf, "t1,{},{}", fmt_f64(*e), fmt_f64(*d))?;
    }
    for (e, d) in &small_t.samples {
        writeln!(&mut buf, "small_t,{},{}", fmt_f64(*e), fmt_f64(*d))?;
    }
    write_file(&config.output.join("stability.csv"), &buf)?;

    finalize(summary, started, config)
}
