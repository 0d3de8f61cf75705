//! Analytic solution of a two-dimensional free electron gas coupled to
//! quantized cavity modes, with numerical cross-checks.
//!
//! - [`system`]: configuration and derived scales (ω_p, ω̃, γ, g, k_F)
//! - [`singlemode`]: eigenspectrum, photon occupation, energy functional
//! - [`response`]: response functions and optical/DC conductivity
//! - [`eft`]: continuum effective theory (running coupling, mass, Casimir)
//! - [`manymode`]: exact mode-mode diagonalization

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod eft;
pub mod error;
pub mod jacobi;
pub mod manymode;
pub mod optimize;
pub mod quad;
pub mod response;
pub mod singlemode;
pub mod system;

pub use error::{Error, Result};
pub use system::{DerivedScales, SystemConfig, Units};

/// Library version, echoed in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
