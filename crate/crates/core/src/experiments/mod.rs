//! Monte-Carlo studies: local-law errors, time-uniform extension, map
//! convergence, concentration, and log-log rate fitting.
//!
//! Every experiment takes a `(seed, stream_block)` pair; trial `i` draws from
//! the ChaCha stream `stream_block + i`, so runs are reproducible bit-for-bit
//! for any thread count as long as callers hand disjoint blocks to different
//! experiments.

mod flow_error;
mod local_law;

pub use flow_error::{
    gronwall_bound_check, gronwall_envelope, map_convergence_error, GronwallCheck, MapConvergence,
};
pub use local_law::{
    concentration_error, local_law_error, time_uniform_error, ConcentrationStat, TimeUniformSample,
};

use std::io::Write;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::numerics::stats::{linear_fit, median};

/// One trial's supremum error at particle count `n`.
#[derive(Debug, Clone)]
pub struct ErrorSample {
    pub n: usize,
    pub trial: usize,
    pub sup_error: f64,
    /// The time parameter of the experiment (`t` or `T`).
    pub param: f64,
    /// Human-readable descriptor of the evaluation region.
    pub region: String,
}

/// Fitted decay rate of per-n median errors.
#[derive(Debug, Clone)]
pub struct RateFitResult {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub n_values: Vec<usize>,
    pub medians: Vec<f64>,
}

/// Least-squares fit of `log median(sup_error)` against `log n`.
pub fn fit_rate(samples: &[ErrorSample]) -> Result<RateFitResult> {
    let mut n_values: Vec<usize> = samples.iter().map(|s| s.n).collect();
    n_values.sort_unstable();
    n_values.dedup();
    if n_values.len() < 3 {
        return Err(Error::FitUndefined(format!(
            "need >= 3 distinct n values, got {}",
            n_values.len()
        )));
    }
    let mut medians = Vec::with_capacity(n_values.len());
    for &n in &n_values {
        let errs: Vec<f64> = samples
            .iter()
            .filter(|s| s.n == n)
            .map(|s| s.sup_error)
            .collect();
        if errs.len() < 10 {
            return Err(Error::FitUndefined(format!(
                "need >= 10 trials per n, got {} at n = {n}",
                errs.len()
            )));
        }
        let med = median(&errs);
        if !(med > 0.0) {
            return Err(Error::FitUndefined(format!(
                "degenerate zero errors at n = {n}"
            )));
        }
        medians.push(med);
    }
    let xs: Vec<f64> = n_values.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = medians.iter().map(|&m| m.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(RateFitResult {
        slope: fit.slope,
        intercept: fit.intercept,
        stderr: fit.slope_stderr,
        n_values,
        medians,
    })
}

/// Time-net size for the uniform-in-time extension: `ceil(mult * n^(2/3))`.
pub fn net_knots(n: usize, mult: f64) -> usize {
    (mult * (n as f64).powf(2.0 / 3.0)).ceil() as usize
}

/// Uniform knot times `k T / knots`, `k = 0..=knots` (collapses to `[0]` for a
/// zero horizon).
pub fn uniform_times(t_horizon: f64, knots: usize) -> Vec<f64> {
    if t_horizon == 0.0 {
        return vec![0.0];
    }
    (0..=knots)
        .map(|k| t_horizon * k as f64 / knots as f64)
        .collect()
}

/// Export samples as CSV `n,trial,sup_error,param`.
pub fn write_error_samples_csv(samples: &[ErrorSample], w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "n,trial,sup_error,param")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{}",
            s.n,
            s.trial,
            fmt_f64(s.sup_error),
            fmt_f64(s.param)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n_values: &[usize], mut f: impl FnMut(usize, usize) -> f64) -> Vec<ErrorSample> {
        let mut out = Vec::new();
        for &n in n_values {
            for trial in 0..12 {
                out.push(ErrorSample {
                    n,
                    trial,
                    sup_error: f(n, trial),
                    param: 1.0,
                    region: "synthetic".into(),
                });
            }
        }
        out
    }

    #[test]
    fn exact_inverse_power_law() {
        let s = synthetic(&[100, 200, 400, 800], |n, _| 3.0 / n as f64);
        let fit = fit_rate(&s).unwrap();
        assert!((fit.slope + 1.0).abs() <= 0.01, "slope {}", fit.slope);
    }

    #[test]
    fn cube_root_with_noise() {
        // 5% multiplicative noise around c n^(-1/3).
        let mut state = 123456789u64;
        let mut noise = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64 - 1.0) * 0.05
        };
        let s = synthetic(&[100, 200, 400, 800, 1600], |n, _| {
            (n as f64).powf(-1.0 / 3.0) * (1.0 + noise())
        });
        let fit = fit_rate(&s).unwrap();
        assert!(
            (-0.37..=-0.30).contains(&fit.slope),
            "slope {} stderr {}",
            fit.slope,
            fit.stderr
        );
    }

    #[test]
    fn constant_errors_fit_zero_slope() {
        let s = synthetic(&[100, 200, 400], |_, _| 0.7);
        let fit = fit_rate(&s).unwrap();
        assert!(fit.slope.abs() <= 1e-12);
    }

    #[test]
    fn degenerate_errors_are_rejected() {
        let s = synthetic(&[100, 200, 400], |_, _| 0.0);
        assert!(matches!(fit_rate(&s), Err(Error::FitUndefined(_))));
    }

    #[test]
    fn net_size_formula() {
        assert_eq!(net_knots(250, 1.0), 40);
        assert_eq!(net_knots(1000, 1.0), 100);
    }
}
