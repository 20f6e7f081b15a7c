//! Statistical validators for the Gaussian quadratic-form concentration bound
//! and the Gaussian integration-by-parts formula.

use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Monte-Carlo check of the quadratic-form concentration bound at second
/// moments: for a real standard Gaussian vector `X` and deterministic `A`,
/// `Var(X^T A X) = tr(A (A + A^T)) <= 2 tr(A A^T)`, with equality for
/// symmetric `A`.
///
/// Runs the estimate over a small family of deterministic matrices (identity,
/// a seeded symmetric draw, a seeded non-symmetric draw) and returns the
/// worst ratio of empirical variance to `2 tr(A A^T)`. The zero matrix is a
/// degenerate member with ratio 0.
pub fn quadratic_form_concentration_test(
    n: usize,
    trials: usize,
    rng: &mut SeededRng,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension(
            "concentration test needs n >= 2".into(),
        ));
    }
    if trials < 1_000 {
        return Err(Error::Configuration(format!(
            "concentration test needs >= 1000 trials, got {trials}"
        )));
    }

    let mut worst: f64 = 0.0;
    for family in 0..3 {
        let a = match family {
            0 => identity_flat(n),
            1 => random_square(n, rng, true),
            _ => random_square(n, rng, false),
        };
        worst = worst.max(quadratic_form_ratio(&a, n, trials, rng));
    }
    Ok(worst)
}

/// Ratio of the empirical variance of `X^T A X - tr A` to `2 tr(A A^T)`.
/// Returns 0 for the zero matrix.
pub fn quadratic_form_ratio(a: &[f64], n: usize, trials: usize, rng: &mut SeededRng) -> f64 {
    let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
    let mut tr_aat = 0.0;
    for v in a.iter() {
        tr_aat += v * v;
    }
    if tr_aat == 0.0 {
        return 0.0;
    }
    let mut x = vec![0.0; n];
    let mut sumsq = 0.0;
    for _ in 0..trials {
        for xi in &mut x {
            *xi = rng.standard_normal();
        }
        let mut form = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += a[i * n + j] * x[j];
            }
            form += x[i] * row;
        }
        let centered = form - trace;
        sumsq += centered * centered;
    }
    (sumsq / trials as f64) / (2.0 * tr_aat)
}

fn identity_flat(n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = 1.0;
    }
    a
}

fn random_square(n: usize, rng: &mut SeededRng, symmetric: bool) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = rng.standard_normal();
        }
    }
    if symmetric {
        for i in 0..n {
            for j in (i + 1)..n {
                let s = 0.5 * (a[i * n + j] + a[j * n + i]);
                a[i * n + j] = s;
                a[j * n + i] = s;
            }
        }
    }
    a
}

/// Outcome of a Gaussian integration-by-parts check on the monomial
/// `f(x) = x^degree`.
#[derive(Debug, Clone, Copy)]
pub struct IbpCheck {
    /// `| E_hat[xi f(xi)] - sigma^2 E_hat[f'(xi)] |`.
    pub residual: f64,
    /// Standard error of the difference estimator.
    pub std_error: f64,
}

impl IbpCheck {
    /// The identity holds when the residual sits within three standard errors.
    pub fn within_three_se(&self) -> bool {
        self.residual <= 3.0 * self.std_error.max(f64::MIN_POSITIVE)
    }
}

/// Monte-Carlo check of `E[xi f(xi)] = sigma^2 E[f'(xi)]` for the monomial
/// `f(x) = x^degree` and `xi ~ N(0, sigma^2)`.
pub fn gaussian_ibp_test(
    poly_degree: u32,
    sigma: f64,
    trials: usize,
    rng: &mut SeededRng,
) -> Result<IbpCheck> {
    if trials < 10_000 {
        return Err(Error::Configuration(format!(
            "integration-by-parts test needs >= 10^4 trials, got {trials}"
        )));
    }
    let d = poly_degree as i32;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..trials {
        let xi = rng.normal(sigma);
        let lhs = xi * xi.powi(d);
        let rhs = if d == 0 {
            0.0
        } else {
            sigma * sigma * (d as f64) * xi.powi(d - 1)
        };
        let diff = lhs - rhs;
        sum += diff;
        sumsq += diff * diff;
    }
    let m = trials as f64;
    let mean = sum / m;
    let var = (sumsq / m - mean * mean).max(0.0);
    Ok(IbpCheck {
        residual: mean.abs(),
        std_error: (var / m).sqrt(),
    })
}
