//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A matrix or sampler was asked for dimension zero (or otherwise unusable).
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// An evaluation point left the open upper half-plane.
    #[error("half-plane violation: Im z = {imag} must be positive ({context})")]
    HalfPlaneViolation { imag: f64, context: &'static str },

    /// Iterative eigensolver did not converge within its sweep budget.
    #[error("eigensolver did not converge after {sweeps} sweeps (n = {n}, off-diagonal norm {offdiag:.3e}, matrix scale {scale:.3e})")]
    EigenNonConvergence {
        n: usize,
        sweeps: usize,
        offdiag: f64,
        scale: f64,
    },

    /// Bad run parameters (empty grids, too few trials, non-positive margins, ...).
    #[error("configuration error: {0}")]
    Configuration(String),

    /// The SDE integrator hit a near-collision it could not refine away.
    #[error("stiff region at t = {t:.6e}: particles {i} and {j} separated by {gap:.3e} after refinement floor")]
    StiffRegion {
        t: f64,
        i: usize,
        j: usize,
        gap: f64,
    },

    /// The self-consistent fixed point solver failed to settle on a branch.
    #[error("branch selection failed after {iterations} iterations (last residual {residual:.3e}, z = {z}, t = {t})")]
    BranchSelection {
        iterations: usize,
        residual: f64,
        z: num_complex::Complex64,
        t: f64,
    },

    /// Too many grid points were swallowed by the hull; enlarge the margin.
    #[error("evaluation region too close to the hull: {swallowed} of {total} points swallowed (limit 5%)")]
    RegionTooClose { swallowed: usize, total: usize },

    /// Rate fitting was requested on degenerate data.
    #[error("rate fit undefined: {0}")]
    FitUndefined(String),
}
