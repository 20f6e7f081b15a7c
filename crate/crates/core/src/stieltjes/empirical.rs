//! Empirical Stieltjes transform of a particle configuration.

use num_complex::Complex64;

use crate::dbm::ParticleConfig;
use crate::stieltjes::debug_check_maps_down;

/// `M_t^N(z) = (1/N) sum_j 2 / (z - lambda_j)` for `Im z > 0`.
pub fn m_n(config: &ParticleConfig, z: Complex64) -> Complex64 {
    m_n_from_positions(config.positions(), z)
}

/// Same transform straight from a position slice (hot-loop variant).
pub fn m_n_from_positions(positions: &[f64], z: Complex64) -> Complex64 {
    debug_assert!(z.im > 0.0, "m_n needs Im z > 0");
    let mut acc = Complex64::new(0.0, 0.0);
    for &lam in positions {
        let d = Complex64::new(z.re - lam, z.im);
        // 2 / d without a complex division: 2 * conj(d) / |d|^2.
        let inv = 2.0 / d.norm_sqr();
        acc += Complex64::new(d.re * inv, -d.im * inv);
    }
    let m = acc / positions.len() as f64;
    debug_check_maps_down(z, m);
    m
}

/// Residual of the self-consistent equation with `S^N(z) = 2/z`:
/// `| M - 2 / (z - 2 t M) |` with `M = m_n(config, z)`.
pub fn self_consistent_residual(config: &ParticleConfig, z: Complex64, t: f64) -> f64 {
    let m = m_n(config, z);
    let denom = z - 2.0 * t * m;
    (m - 2.0 / denom).norm()
}
