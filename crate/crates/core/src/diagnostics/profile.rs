//! Linear profiles `Ψ = e^{-it|∇|}Φ` and their weighted norms.

use super::vector_fields::box_window;
use crate::multipliers::{abs_grad, halfwave_apply};
use crate::physics::NormalizedWave;
use crate::spectral::SpectralField;

/// `Ψ(t) = e^{-it|∇|} Φ(t)`, which is constant in time for the free wave.
pub fn build_profile(t: f64, wave: &NormalizedWave) -> [SpectralField; 2] {
    [0, 1].map(|a| halfwave_apply(-t, &wave.phi[a]))
}

/// `(Σ_{a,l} ‖ |ξ| ∂_{ξ_l} Ψ̂_a ‖²_{H^s})^{1/2}`.
///
/// `∂_{ξ_l}` is applied as multiplication by `-i x_l` in physical space,
/// with `x` cut off by [`box_window`] so it stays periodic.
pub fn weighted_profile_norm(profile: &[SpectralField; 2], order: f64) -> f64 {
    let mut total = 0.0;
    for psi in profile {
        let grid = *psi.grid();
        let phys = psi.to_physical();
        for l in 0..3 {
            let data = phys
                .iter()
                .enumerate()
                .map(|(idx, z)| {
                    let [a, b, c] = grid.unflat(idx);
                    let x = [grid.coord(a), grid.coord(b), grid.coord(c)];
                    z * (box_window(&grid, x) * x[l])
                })
                .collect();
            let moment = SpectralField::from_complex_physical(grid, data);
            total += abs_grad(&moment).sobolev_norm(order).powi(2);
        }
    }
    total.sqrt()
}
