//! Deterministic sampling, dense Hermitian linear algebra and the exact
//! random-matrix identity validators.

pub mod eigen;
pub mod identities;
pub mod linalg;
pub mod matrix;
pub mod resolvent;
pub mod stats;

pub use eigen::{eigen_sym_with_vectors, eigenpair_residual, eigenvalues_sym, Spectrum};
pub use identities::{gaussian_ibp_test, quadratic_form_concentration_test, IbpCheck};
pub use matrix::{sample_ensemble, sample_goe, sample_gue, Beta, SymmetricMatrix};
pub use resolvent::{
    check_resolvent_identity, check_trace_difference, check_ward, resolvent, ResolventMatrix,
};
