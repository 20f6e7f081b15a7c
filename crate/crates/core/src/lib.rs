//! Simulation library for multiple Schramm-Loewner evolution driven by Dyson
//! Brownian motion, its hydrodynamic limit through the complex Burgers
//! equation, and a Monte-Carlo harness measuring convergence rates between
//! the two.
//!
//! The crate is organised along the pipeline:
//!
//! - [`numerics`]: seeded sampling, a dense symmetric eigensolver, resolvents
//!   and the exact identity validators (Ward, resolvent, trace-difference,
//!   Gaussian quadratic forms).
//! - [`dbm`]: Dyson Brownian motion driver paths for `beta = 1, 2`, sampled
//!   both through the matrix model and through the interacting SDE.
//! - [`stieltjes`]: the empirical transform `M_t^N`, its hydrodynamic limit
//!   `M_t^infty` (closed form and fixed-point solver) and the stability
//!   diagnostics around the self-consistent equation.
//! - [`loewner`]: the N-driver Loewner flow, the limit flow and the
//!   hull-exclusion geometry that decides where convergence is measured.
//! - [`experiments`]: Monte-Carlo studies with rate fitting.

pub mod dbm;
pub mod error;
pub mod experiments;
pub mod export;
pub mod loewner;
pub mod numerics;
pub mod parallel;
pub mod rng;
pub mod stieltjes;

pub use error::{Error, Result};
pub use rng::SeededRng;
