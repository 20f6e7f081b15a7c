//! Multi-driver Loewner flow, its hydrodynamic limit, and the hull-exclusion
//! geometry that decides where map convergence is measured.

mod flow;
mod region;

pub use flow::{integrate_flow_infty, integrate_flow_n, FlowTrajectory};
pub use region::{hull_box, map_displacement_check, region_g, EvaluationRegion, HullBox};

use std::io::Write;

use crate::export::fmt_f64;

/// Export a trajectory as CSV `t,re_z0,im_z0,re_g,im_g,alive`.
pub fn write_trajectory_csv(traj: &FlowTrajectory, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "t,re_z0,im_z0,re_g,im_g,alive")?;
    for (ti, &t) in traj.times.iter().enumerate() {
        for (pi, &z0) in traj.seeds.iter().enumerate() {
            let g = traj.values[ti][pi];
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_f64(t),
                fmt_f64(z0.re),
                fmt_f64(z0.im),
                fmt_f64(g.re),
                fmt_f64(g.im),
                u8::from(traj.alive[ti][pi])
            )?;
        }
    }
    Ok(())
}
