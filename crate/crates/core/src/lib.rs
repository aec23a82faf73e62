//! Pseudo-spectral simulation and operator verification for the hyperbolic
//! Ericksen–Leslie liquid crystal system without kinematic transport.

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod multipliers;
pub mod physics;
pub mod spectral;
pub mod timestepper;

pub use error::{Error, Result};
