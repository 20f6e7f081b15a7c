//! Self-consistent fixed point `s = s_0(z + 4 t s)` for general atomic initial
//! measures, plus the perturbation-stability experiment.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::stats::linear_fit;
use crate::rng::SeededRng;
use crate::stieltjes::{debug_check_maps_down, InitialMeasure};

/// `s_0(w) = integral dmu_0(x) / (x - w)`, mapping the upper half-plane to
/// itself.
pub fn stieltjes_s0(mu: &InitialMeasure, w: Complex64) -> Complex64 {
    match mu {
        InitialMeasure::DiracAtZero => -1.0 / w,
        InitialMeasure::Discrete(atoms) => atoms
            .iter()
            .map(|&(x, wt)| wt / (Complex64::new(x, 0.0) - w))
            .sum(),
    }
}

/// `s_0'(w) = integral dmu_0(x) / (x - w)^2`.
pub fn stieltjes_s0_prime(mu: &InitialMeasure, w: Complex64) -> Complex64 {
    match mu {
        InitialMeasure::DiracAtZero => 1.0 / (w * w),
        InitialMeasure::Discrete(atoms) => atoms
            .iter()
            .map(|&(x, wt)| {
                let d = Complex64::new(x, 0.0) - w;
                wt / (d * d)
            })
            .sum(),
    }
}

/// Damping factor for the Picard fallback.
const PICARD_DAMPING: f64 = 0.5;
/// Switch to Newton once `|4 t s_0'(w)| < 0.9`.
const NEWTON_THRESHOLD: f64 = 0.9;
const MAX_ITERATIONS: usize = 500;

/// Solve `s = s_0(z + 4 t s) + perturbation` for `s` in the upper half-plane,
/// keeping `Im(z + 4 t s) > 0` along the iteration.
pub fn solve_self_consistent(
    mu: &InitialMeasure,
    z: Complex64,
    t: f64,
    tol: f64,
    perturbation: Complex64,
) -> Result<Complex64> {
    if z.im <= 0.0 {
        return Err(Error::HalfPlaneViolation {
            imag: z.im,
            context: "fixed-point solve",
        });
    }
    if t == 0.0 {
        return Ok(stieltjes_s0(mu, z) + perturbation);
    }
    let mut s = stieltjes_s0(mu, z);
    let mut residual = f64::INFINITY;
    for iteration in 0..MAX_ITERATIONS {
        let w = z + 4.0 * t * s;
        if w.im <= 0.0 {
            // The argument crossed the real axis; pull back toward s_0(z).
            s = 0.5 * (s + stieltjes_s0(mu, z));
            continue;
        }
        let target = stieltjes_s0(mu, w) + perturbation;
        residual = (s - target).norm();
        if residual <= tol {
            return Ok(s);
        }
        let derivative = 4.0 * t * stieltjes_s0_prime(mu, w);
        let proposal = if derivative.norm() < NEWTON_THRESHOLD {
            // Newton step on F(s) = s - s_0(z + 4 t s) - perturbation.
            s - (s - target) / (Complex64::new(1.0, 0.0) - derivative)
        } else {
            (1.0 - PICARD_DAMPING) * s + PICARD_DAMPING * target
        };
        // Keep the iterate's argument inside the half-plane.
        let mut step = proposal - s;
        let mut guard = 0;
        while (z + 4.0 * t * (s + step)).im <= 0.0 && guard < 60 {
            step *= 0.5;
            guard += 1;
        }
        s += step;
        let _ = iteration;
    }
    Err(Error::BranchSelection {
        iterations: MAX_ITERATIONS,
        residual,
        z,
        t,
    })
}

/// Hydrodynamic limit for a general initial measure: `M = -2 s_t` with
/// `s_t = s_0(z + 4 t s_t)` solved to `tol`.
pub fn m_infty_general(z: Complex64, t: f64, mu: &InitialMeasure, tol: f64) -> Result<Complex64> {
    let s = solve_self_consistent(mu, z, t, tol, Complex64::new(0.0, 0.0))?;
    let m = -2.0 * s;
    debug_check_maps_down(z, m);
    Ok(m)
}

/// Result of the perturbation-stability study.
#[derive(Debug, Clone)]
pub struct StabilityExperiment {
    /// Least-squares slope of `log |s - s_tilde|` against `log eps`.
    pub exponent: f64,
    /// `(eps, |s - s_tilde|)` pairs actually measured.
    pub samples: Vec<(f64, f64)>,
}

/// Perturb the self-consistent equation additively by `eps * exp(i theta)`
/// (theta uniform), solve the perturbed equation exactly, and fit the decay
/// exponent of `|s - s_tilde|` in `eps`. Evaluated at `z = i eta` for the
/// origin Dirac measure.
pub fn stability_experiment(
    t: f64,
    eta: f64,
    eps_list: &[f64],
    rng: &mut SeededRng,
) -> Result<StabilityExperiment> {
    if !(t > 0.0 && eta > 0.0) {
        return Err(Error::Configuration(
            "stability experiment needs t > 0, eta > 0".into(),
        ));
    }
    let finite: Vec<f64> = eps_list.iter().copied().filter(|&e| e > 0.0).collect();
    if finite.len() < 2 {
        return Err(Error::Configuration(
            "need at least two positive eps values".into(),
        ));
    }
    let spread = finite.iter().cloned().fold(f64::INFINITY, f64::min)
        / finite.iter().cloned().fold(0.0f64, f64::max);
    if spread > 1e-3 {
        return Err(Error::Configuration(
            "eps values must span >= 3 decades".into(),
        ));
    }
    let mu = InitialMeasure::DiracAtZero;
    let z = Complex64::new(0.0, eta);
    let tol = 1e-13;
    let exact = solve_self_consistent(&mu, z, t, tol, Complex64::new(0.0, 0.0))?;
    let mut samples = Vec::with_capacity(eps_list.len());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &eps in eps_list {
        if eps == 0.0 {
            samples.push((0.0, 0.0));
            continue;
        }
        let theta = rng.uniform_angle();
        let pert = Complex64::from_polar(eps, theta);
        let perturbed = solve_self_consistent(&mu, z, t, tol, pert)?;
        let diff = (exact - perturbed).norm();
        samples.push((eps, diff));
        if diff > 0.0 {
            xs.push(eps.ln());
            ys.push(diff.ln());
        }
    }
    if xs.len() < 2 {
        return Err(Error::FitUndefined(
            "all perturbed solves collapsed onto the exact root".into(),
        ));
    }
    let fit = linear_fit(&xs, &ys)?;
    Ok(StabilityExperiment {
        exponent: fit.slope,
        samples,
    })
}
