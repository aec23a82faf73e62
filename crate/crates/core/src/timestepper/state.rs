use crate::physics::{AngleState, FlowState, NormalizedWave};
use crate::spectral::{Grid3, VectorField3};

/// Evolved variables `(v, Φ)` plus the `ξ = 0` angle modes, which `Φ`
/// cannot encode.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub t: f64,
    pub step: u64,
    pub flow: FlowState,
    pub wave: NormalizedWave,
    pub mean_phi: [f64; 2],
    pub mean_dphi: [f64; 2],
}

impl SimulationState {
    pub fn equilibrium(grid: Grid3) -> Self {
        Self::from_parts(0.0, FlowState::zeros(grid), &AngleState::zeros(grid))
    }

    /// Builds the state from a velocity in v-coordinates and angle data.
    pub fn from_parts(t: f64, flow: FlowState, angles: &AngleState) -> Self {
        let mean_phi = [angles.phi[0].mean().re, angles.phi[1].mean().re];
        let mean_dphi = [angles.dphi[0].mean().re, angles.dphi[1].mean().re];
        Self { t, step: 0, flow, wave: NormalizedWave::from_angles(angles), mean_phi, mean_dphi }
    }

    pub fn grid(&self) -> &Grid3 {
        self.flow.grid()
    }

    pub fn angles(&self) -> AngleState {
        self.wave.to_angles(self.mean_phi)
    }

    pub fn velocity(&self) -> VectorField3 {
        self.flow.velocity()
    }

    /// Name of the first field holding a non-finite value.
    pub fn first_non_finite(&self) -> Option<&'static str> {
        if !self.flow.v.is_finite() {
            Some("v")
        } else if !self.wave.phi[0].is_finite() {
            Some("Phi1")
        } else if !self.wave.phi[1].is_finite() {
            Some("Phi2")
        } else if !self.mean_phi.iter().chain(&self.mean_dphi).all(|x| x.is_finite()) {
            Some("mean angle modes")
        } else {
            None
        }
    }
}
