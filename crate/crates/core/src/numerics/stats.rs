//! Statistical plumbing shared by the samplers and the experiment harness:
//! Kolmogorov-Smirnov distances, the semicircle law, medians and
//! least-squares fits with slope standard errors.

use crate::error::{Error, Result};

/// CDF of the semicircle law supported on `[-radius, radius]`.
pub fn semicircle_cdf(x: f64, radius: f64) -> f64 {
    if x <= -radius {
        return 0.0;
    }
    if x >= radius {
        return 1.0;
    }
    let r2 = radius * radius;
    0.5 + (x * (r2 - x * x).sqrt()) / (std::f64::consts::PI * r2)
        + (x / radius).asin() / std::f64::consts::PI
}

/// One-sample KS distance between sorted samples and a reference CDF.
pub fn ks_distance_to_cdf(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "KS distance needs samples");
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let hi = (i + 1) as f64 / n as f64;
        let lo = i as f64 / n as f64;
        worst = worst.max((hi - f).abs()).max((f - lo).abs());
    }
    worst
}

/// Two-sample KS distance between sorted samples.
pub fn ks_distance_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut worst = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        worst = worst.max((i as f64 / na - j as f64 / nb).abs());
    }
    worst
}

/// Median of a sample (averages the middle pair for even sizes).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Ordinary least squares `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope estimate.
    pub slope_stderr: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::FitUndefined(format!(
            "need >= 2 paired points, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx == 0.0 {
        return Err(Error::FitUndefined("all abscissae equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss_res = 0.0;
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        let r = yi - (slope * xi + intercept);
        ss_res += r * r;
    }
    let dof = (x.len().max(3) - 2) as f64;
    let slope_stderr = (ss_res / dof / sxx).sqrt();
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr,
    })
}
