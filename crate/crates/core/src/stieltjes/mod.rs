//! Stieltjes-transform evaluators.
//!
//! Conventions follow the transform `M(z) = integral 2 dmu(x) / (z - x)`,
//! mapping the upper half-plane into the lower one. The auxiliary variable
//! used by the fixed-point machinery is `s = -M / 2` with argument
//! `w = z + 4 t s`.

mod empirical;
mod fixed_point;
mod limit;

pub use empirical::{m_n, m_n_from_positions, self_consistent_residual};
pub use fixed_point::{
    m_infty_general, solve_self_consistent, stability_experiment, stieltjes_s0, stieltjes_s0_prime,
    StabilityExperiment,
};
pub use limit::{burgers_residual, m_infty_delta0};

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::export::fmt_f64;

/// Rectangular evaluation lattice in the open upper half-plane.
#[derive(Debug, Clone)]
pub struct GridG {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl GridG {
    pub fn new(re_range: (f64, f64), im_range: (f64, f64), counts: (usize, usize)) -> Result<Self> {
        let (re_min, re_max) = re_range;
        let (im_min, im_max) = im_range;
        let (n_re, n_im) = counts;
        if !(im_min > 0.0) {
            return Err(Error::HalfPlaneViolation {
                imag: im_min,
                context: "grid construction",
            });
        }
        if re_max < re_min || im_max < im_min || n_re == 0 || n_im == 0 {
            return Err(Error::Configuration("degenerate grid rectangle".into()));
        }
        if (n_re > 1 && re_max == re_min) || (n_im > 1 && im_max == im_min) {
            return Err(Error::Configuration("repeated grid points".into()));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
            n_re,
            n_im,
        })
    }

    /// Standard local-law grid `[-2, 2] x [1, 2]` with 21 x 11 points.
    pub fn standard() -> Self {
        Self::new((-2.0, 2.0), (1.0, 2.0), (21, 11)).expect("valid standard grid")
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, ix: usize, iy: usize) -> Complex64 {
        let re = if self.n_re == 1 {
            self.re_min
        } else {
            self.re_min + (self.re_max - self.re_min) * ix as f64 / (self.n_re - 1) as f64
        };
        let im = if self.n_im == 1 {
            self.im_min
        } else {
            self.im_min + (self.im_max - self.im_min) * iy as f64 / (self.n_im - 1) as f64
        };
        Complex64::new(re, im)
    }

    /// Row-major iteration (imaginary axis outer, real axis inner).
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.n_im).flat_map(move |iy| (0..self.n_re).map(move |ix| self.point(ix, iy)))
    }

    /// Largest modulus over the lattice.
    pub fn max_abs(&self) -> f64 {
        self.points().fold(0.0f64, |m, z| m.max(z.norm()))
    }
}

/// Initial measure for the hydrodynamic limit: the origin Dirac mass or a
/// normalised atomic measure with bounded support.
#[derive(Debug, Clone)]
pub enum InitialMeasure {
    DiracAtZero,
    Discrete(Vec<(f64, f64)>),
}

impl InitialMeasure {
    /// Validate atom weights: positive, normalised to within 1e-12.
    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Configuration("discrete measure needs atoms".into()));
        }
        if atoms.iter().any(|&(_, w)| !(w > 0.0)) {
            return Err(Error::Configuration("atom weights must be positive".into()));
        }
        let total: f64 = atoms.iter().map(|&(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Configuration(format!(
                "atom weights sum to {total}, expected 1"
            )));
        }
        Ok(Self::Discrete(atoms))
    }
}

/// Check the half-plane mapping invariant on an evaluator output.
#[inline]
pub(crate) fn debug_check_maps_down(z: Complex64, m: Complex64) {
    debug_assert!(
        !(z.im > 0.0) || m.im < 0.0 || m.norm() == 0.0,
        "half-plane mapping violated: z = {z}, M = {m}"
    );
}

/// Export grid evaluations as CSV `re_z,im_z,t,re_m,im_m`.
pub fn write_grid_csv(
    grid: &GridG,
    t: f64,
    values: &[Complex64],
    w: &mut impl Write,
) -> std::io::Result<()> {
    assert_eq!(values.len(), grid.len());
    writeln!(w, "re_z,im_z,t,re_m,im_m")?;
    for (z, m) in grid.points().zip(values.iter()) {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(z.re),
            fmt_f64(z.im),
            fmt_f64(t),
            fmt_f64(m.re),
            fmt_f64(m.im)
        )?;
    }
    Ok(())
}
