//! Residuals of the structural constraints along a run.

use serde::{Deserialize, Serialize};

use crate::physics::angles_to_director;
use crate::timestepper::SimulationState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintResiduals {
    /// `max |div u|`
    pub div_u: f64,
    /// `max ||d| - 1|` for the director rebuilt from the angles, NaN when
    /// the angles have left the chart.
    pub unit_norm_d: f64,
    /// `|mean u|`
    pub mean_u: f64,
}

pub fn constraint_residuals(state: &SimulationState) -> ConstraintResiduals {
    let u = state.velocity();
    let unit_norm_d = angles_to_director(&state.angles()).map_or(f64::NAN, |d| d.unit_norm_defect());
    ConstraintResiduals {
        div_u: u.divergence().sup_norm(),
        unit_norm_d,
        mean_u: u.mean().iter().map(|m| m.norm_sqr()).sum::<f64>().sqrt(),
    }
}
