//! Time integration of the coupled system in `(v, Φ)` variables.

mod initial;
mod run;
mod scheme;
mod state;

pub use initial::{generate_initial_data, smallness_norm, InitialDataSpec, Profile};
pub use run::{run, Observer, RunFailure, RunOptions, RunOutcome};
pub use scheme::{phi_functions, step, Scheme, SchemeConfig, Stepper};
pub use state::SimulationState;
