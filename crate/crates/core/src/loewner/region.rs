//! Hull-exclusion geometry: the box containing the hull, the evaluation
//! region safely above it, and the conformal displacement bound.

use crate::dbm::DbmPath;
use crate::error::{Error, Result};
use crate::loewner::FlowTrajectory;
use crate::stieltjes::GridG;

/// Containment box for the hull: `|Re z| <= M`, `0 < Im z <= 2 sqrt(T)`, where
/// `M` is the realized sup of driver moduli up to the horizon.
#[derive(Debug, Clone, Copy)]
pub struct HullBox {
    /// Realized `sup_t sup_i |lambda_t^i|`.
    pub m: f64,
    /// Time horizon `T`.
    pub t_horizon: f64,
}

impl HullBox {
    /// Radius of the centred ball containing the box:
    /// `r = sqrt(M^2 + (2 sqrt(T))^2)`.
    pub fn radius(&self) -> f64 {
        (self.m * self.m + 4.0 * self.t_horizon).sqrt()
    }

    pub fn im_top(&self) -> f64 {
        2.0 * self.t_horizon.sqrt()
    }
}

/// Realized hull box of a driver path up to time `t_horizon`.
pub fn hull_box(path: &DbmPath, t_horizon: f64) -> HullBox {
    let m = path
        .configs()
        .iter()
        .filter(|c| c.time() <= t_horizon + 1e-15)
        .fold(0.0f64, |acc, c| acc.max(c.max_abs()));
    HullBox { m, t_horizon }
}

/// Evaluation region above the hull box, with the predicted image strip.
#[derive(Debug, Clone)]
pub struct EvaluationRegion {
    pub grid: GridG,
    /// Predicted bound on `|Re g_t(z)|` over the grid: `max_G |z| + 5 r`.
    pub re_bound: f64,
    /// Lower edge of the predicted image strip at the horizon:
    /// `sqrt(im_min^2 - 4T)`.
    pub image_im_lower: f64,
}

impl EvaluationRegion {
    /// Image-strip bounds for a seed at height `im_z0` after time `t`:
    /// `sqrt(im_z0^2 - 4t) <= Im g <= im_z0`.
    pub fn image_strip(&self, im_z0: f64, t: f64) -> (f64, f64) {
        ((im_z0 * im_z0 - 4.0 * t).max(0.0).sqrt(), im_z0)
    }
}

impl EvaluationRegion {
    /// Wrap an explicit grid, checking it stays above the hull box with a
    /// positive margin.
    pub fn with_grid(hull: &HullBox, grid: GridG) -> Result<Self> {
        if grid.im_min <= hull.im_top() {
            return Err(Error::Configuration(format!(
                "grid im_min {} does not clear the hull top {}",
                grid.im_min,
                hull.im_top()
            )));
        }
        let r = hull.radius();
        let re_bound = grid.max_abs() + 5.0 * r;
        let image_im_lower = (grid.im_min * grid.im_min - 4.0 * hull.t_horizon)
            .max(0.0)
            .sqrt();
        Ok(Self {
            grid,
            re_bound,
            image_im_lower,
        })
    }
}

/// Build the evaluation grid `[-re_halfwidth, re_halfwidth] x [im_min, im_min + im_height]`
/// with `im_min = 2 sqrt(T) + margin`, guaranteed disjoint from the hull box.
pub fn region_g(
    hull: &HullBox,
    margin: f64,
    re_halfwidth: f64,
    im_height: f64,
    counts: (usize, usize),
) -> Result<EvaluationRegion> {
    if !(margin > 0.0) {
        return Err(Error::Configuration(format!(
            "margin must be positive, got {margin}"
        )));
    }
    if !(im_height >= 0.0 && re_halfwidth >= 0.0) {
        return Err(Error::Configuration(
            "region extents must be nonnegative".into(),
        ));
    }
    let im_min = hull.im_top() + margin;
    let grid = GridG::new(
        (-re_halfwidth, re_halfwidth),
        (im_min, im_min + im_height),
        counts,
    )?;
    let r = hull.radius();
    let re_bound = grid.max_abs() + 5.0 * r;
    let image_im_lower = (im_min * im_min - 4.0 * hull.t_horizon).max(0.0).sqrt();
    Ok(EvaluationRegion {
        grid,
        re_bound,
        image_im_lower,
    })
}

/// Displacement-bound check: max over alive grid points of `|g(z) - z| - 5r`
/// at the trajectory's final time. Nonpositive return means the bound holds.
pub fn map_displacement_check(flow: &FlowTrajectory, hull: &HullBox) -> f64 {
    let bound = 5.0 * hull.radius();
    let mut worst = f64::NEG_INFINITY;
    for ((z0, g), &alive) in flow
        .seeds
        .iter()
        .zip(flow.final_values().iter())
        .zip(flow.final_alive().iter())
    {
        if alive {
            worst = worst.max((g - z0).norm() - bound);
        }
    }
    worst
}
