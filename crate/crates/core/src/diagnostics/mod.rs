//! Energies, profiles, decay fits and constraint residuals.

mod constraints;
mod energy;
mod fit;
mod profile;
mod vector_fields;

pub use constraints::{constraint_residuals, ConstraintResiduals};
pub use energy::{
    dissipation_rate, energy_e0, multi_index_weight, velocity_sum, wave_sum, wave_sup, EnergyReport, EnergyTracker,
};
pub use fit::{decay_fit, DecayFit, MIN_FIT_SAMPLES};
pub use profile::{build_profile, weighted_profile_norm};
pub use vector_fields::{apply_word, box_window, energy_ea, rotation_scalar, rotation_vector, Letter, Word, WordEnergy};
