//! Closed-form hydrodynamic limit for the origin start and the Burgers
//! residual diagnostic.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::stieltjes::debug_check_maps_down;

/// Hydrodynamic limit transform for `mu_0 = delta_0`:
/// the root of `M (z - 2 t M) = 2` with `Im M < 0`, continuous in `(z, t)`
/// with `M_0 = 2/z`.
pub fn m_infty_delta0(z: Complex64, t: f64) -> Complex64 {
    debug_assert!(z.im > 0.0, "m_infty_delta0 needs Im z > 0");
    debug_assert!(t >= 0.0);
    let m = if t == 0.0 {
        2.0 / z
    } else {
        // Discriminant z^2 - 16 t never touches [0, inf) for Im z > 0, so the
        // branch with positive imaginary part is the continuous one reached
        // from the t -> 0 limit 2/z.
        let mut w = (z * z - 16.0 * t).sqrt();
        if w.im < 0.0 {
            w = -w;
        }
        (z - w) / (4.0 * t)
    };
    debug_check_maps_down(z, m);
    m
}

/// Central-difference residual of the complex Burgers equation
/// `dM/dt + 2 M dM/dz = 0` evaluated on the closed form.
pub fn burgers_residual(t: f64, z: Complex64, h_z: f64, h_t: f64) -> Result<f64> {
    if !(h_z > 0.0 && h_t > 0.0) {
        return Err(Error::Configuration("step sizes must be positive".into()));
    }
    // The branch cut sits on the real axis; keep the z-stencil strictly above
    // it and the t-stencil strictly positive.
    if z.im <= h_z {
        return Err(Error::Configuration(format!(
            "z-step {h_z} reaches the branch cut from Im z = {}",
            z.im
        )));
    }
    if t <= h_t {
        return Err(Error::Configuration(format!(
            "t-step {h_t} too large for t = {t}"
        )));
    }
    let m = m_infty_delta0(z, t);
    let dm_dt = (m_infty_delta0(z, t + h_t) - m_infty_delta0(z, t - h_t)) / (2.0 * h_t);
    let dz = Complex64::new(h_z, 0.0);
    let dm_dz = (m_infty_delta0(z + dz, t) - m_infty_delta0(z - dz, t)) / (2.0 * h_z);
    Ok((dm_dt + 2.0 * m * dm_dz).norm())
}
