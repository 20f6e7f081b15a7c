//! Matrix-model route: marginals are eigenvalues of `-2 sqrt(t) A` and paths
//! accumulate Brownian entry increments so that every marginal matches.

use crate::dbm::{Beta, DbmPath, ParticleConfig};
use crate::error::{Error, Result};
use crate::numerics::eigen::eigenvalues_sym;
use crate::numerics::matrix::{sample_ensemble, SymmetricMatrix};
use crate::rng::SeededRng;

/// Spectrum of `-2 sqrt(t) A` with `A` GOE (`beta = 1`) or GUE (`beta = 2`).
/// At `t = 0` every particle sits at the origin.
pub fn sample_spectrum_matrix(
    n: usize,
    t: f64,
    beta: Beta,
    rng: &mut SeededRng,
) -> Result<ParticleConfig> {
    if !(t >= 0.0) {
        return Err(Error::Configuration(format!("negative time {t}")));
    }
    if t == 0.0 {
        return ParticleConfig::at_origin(0.0, n);
    }
    let a = sample_ensemble(n, beta, rng)?;
    let spectrum = eigenvalues_sym(&a)?;
    let scale = -2.0 * t.sqrt();
    let positions: Vec<f64> = spectrum.values().iter().map(|v| scale * v).collect();
    ParticleConfig::new(t, positions)
}

/// Matrix Brownian path: entry increments are independent Gaussians sized so
/// the marginal at `t` equals the law of the spectrum of `-2 sqrt(t) A`.
/// Eigen-decomposition happens only at the requested times.
pub fn simulate_path_matrix(
    n: usize,
    times: &[f64],
    beta: Beta,
    rng: &mut SeededRng,
) -> Result<DbmPath> {
    if times.is_empty() {
        return Err(Error::Configuration("empty time grid".into()));
    }
    if !times.windows(2).all(|w| w[0] < w[1]) || times[0] < 0.0 {
        return Err(Error::Configuration(
            "times must be strictly increasing and >= 0".into(),
        ));
    }
    let mut h = SymmetricMatrix::zeros(n, beta)?;
    let mut t_cur = 0.0;
    let mut configs = Vec::with_capacity(times.len());
    for &t in times {
        let dt = t - t_cur;
        if dt > 0.0 {
            accumulate_increment(&mut h, beta, dt, rng);
            t_cur = t;
        }
        if t == 0.0 {
            configs.push(ParticleConfig::at_origin(0.0, n)?);
        } else {
            let spectrum = eigenvalues_sym(&h)?;
            configs.push(ParticleConfig::new(t, spectrum.values().to_vec())?);
        }
    }
    DbmPath::from_configs(configs, beta)
}

/// Add a Brownian increment over `dt`. Variances match the marginal of
/// `-2 sqrt(t) A`: for `beta = 1` off-diagonal `4 dt / n` and diagonal
/// `8 dt / n`; for `beta = 2` off-diagonal components `2 dt / n` each and a
/// real diagonal with variance `4 dt / n`.
fn accumulate_increment(h: &mut SymmetricMatrix, beta: Beta, dt: f64, rng: &mut SeededRng) {
    let n = h.n();
    match beta {
        Beta::One => {
            let off = (4.0 * dt / n as f64).sqrt();
            let diag = (8.0 * dt / n as f64).sqrt();
            for i in 0..n {
                for j in i..n {
                    let sd = if i == j { diag } else { off };
                    let inc = rng.normal(sd);
                    let v = h.entry(i, j).re + inc;
                    h.set_entry(i, j, num_complex::Complex64::new(v, 0.0));
                }
            }
        }
        Beta::Two => {
            let off = (2.0 * dt / n as f64).sqrt();
            let diag = (4.0 * dt / n as f64).sqrt();
            for i in 0..n {
                for j in i..n {
                    if i == j {
                        let v = h.entry(i, i).re + rng.normal(diag);
                        h.set_entry(i, i, num_complex::Complex64::new(v, 0.0));
                    } else {
                        let cur = h.entry(i, j);
                        let v = num_complex::Complex64::new(
                            cur.re + rng.normal(off),
                            cur.im + rng.normal(off),
                        );
                        h.set_entry(i, j, v);
                    }
                }
            }
        }
    }
}
