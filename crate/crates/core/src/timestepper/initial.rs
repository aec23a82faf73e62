//! Small-data initial conditions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SimulationState;
use crate::error::{Error, Result};
use crate::multipliers::{abs_grad, leray_project};
use crate::physics::{AngleState, FlowState};
use crate::spectral::{Axis, Grid3, SpectralField, VectorField3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    GaussianBump,
    RandomBand,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDataSpec {
    pub epsilon0: f64,
    #[serde(default)]
    pub seed: u64,
    /// `[kmin, kmax]` in wave-number units.
    pub band: [f64; 2],
    pub profile: Profile,
    /// Order `N` of the velocity norm in the smallness condition.
    #[serde(default = "default_order")]
    pub sobolev_order: f64,
}

fn default_order() -> f64 {
    4.0
}

impl InitialDataSpec {
    pub fn new(epsilon0: f64, seed: u64, band: [f64; 2], profile: Profile) -> Self {
        Self { epsilon0, seed, band, profile, sobolev_order: default_order() }
    }
}

/// `‖u‖_{H^N} + Σ_a (‖∇φ_a‖ + ‖∂tφ_a‖)`.
pub fn smallness_norm(u: &VectorField3, a: &AngleState, order: f64) -> f64 {
    u.sobolev_norm(order) + (0..2).map(|k| abs_grad(&a.phi[k]).l2_norm() + a.dphi[k].l2_norm()).sum::<f64>()
}

fn band_mask(grid: &Grid3, band: [f64; 2]) -> Vec<bool> {
    (0..grid.len())
        .map(|idx| {
            let xi = grid.wave_vector(idx);
            let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            grid.is_retained(idx) && r >= band[0] && r <= band[1]
        })
        .collect()
}

fn masked(f: &SpectralField, mask: &[bool]) -> SpectralField {
    let mut out = f.clone();
    for (c, &keep) in out.coeffs_mut().iter_mut().zip(mask) {
        if !keep {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    out
}

fn random_field(grid: Grid3, mask: &[bool], rng: &mut ChaCha8Rng) -> SpectralField {
    let coeffs: Vec<Complex64> = mask
        .iter()
        .map(|&keep| {
            let (re, im) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if keep {
                Complex64::new(re, im)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    SpectralField::from_coeffs(grid, coeffs).expect("sized by grid").real_part()
}

/// Divergence-free zero-mean velocity and angle data in the band, rescaled
/// so that [`smallness_norm`] equals `epsilon0`.
pub fn generate_initial_data(spec: &InitialDataSpec, grid: Grid3) -> Result<SimulationState> {
    let [kmin, kmax] = spec.band;
    if !(kmin >= 0.0 && kmax >= kmin && kmax.is_finite()) {
        return Err(Error::InvalidArgument(format!("invalid band [{kmin}, {kmax}]")));
    }
    if !(spec.epsilon0 >= 0.0 && spec.epsilon0.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon0 must be nonnegative, got {}", spec.epsilon0)));
    }
    let mask = band_mask(&grid, spec.band);
    let nonzero_modes = mask.iter().enumerate().filter(|&(i, &m)| m && i != 0).count();
    if nonzero_modes == 0 {
        return Err(Error::EmptyBand { kmin, kmax });
    }

    let (u, angles) = match spec.profile {
        Profile::RandomBand => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let mut u = leray_project(&VectorField3::new([
                random_field(grid, &mask, &mut rng),
                random_field(grid, &mask, &mut rng),
                random_field(grid, &mask, &mut rng),
            ]));
            for c in 0..3 {
                u.component_mut(c).coeffs_mut()[0] = Complex64::new(0.0, 0.0);
            }
            let mut fs: Vec<SpectralField> = (0..4).map(|_| random_field(grid, &mask, &mut rng)).collect();
            for f in &mut fs {
                f.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
            }
            let [p1, p2, q1, q2]: [SpectralField; 4] = fs.try_into().expect("four fields");
            (u, AngleState::new(p1, p2, q1, q2))
        }
        Profile::GaussianBump => {
            let sigma = 4.0 / kmax.max(grid.min_wavenumber());
            let g = SpectralField::from_fn(grid, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * sigma * sigma)).exp());
            let g = masked(&g, &mask);
            // Swirl u = curl(0, 0, G) is divergence-free with zero mean.
            let mut u = VectorField3::new([
                g.differentiate(Axis::X2, 1),
                g.differentiate(Axis::X1, 1).scaled(-1.0),
                SpectralField::zeros(grid),
            ]);
            for c in 0..3 {
                u.component_mut(c).coeffs_mut()[0] = Complex64::new(0.0, 0.0);
            }
            (u, AngleState::new(g.clone(), g.scaled(0.5), g.scaled(0.5), g.scaled(-1.0)))
        }
    };

    let total = smallness_norm(&u, &angles, spec.sobolev_order);
    let s = if total > 0.0 { spec.epsilon0 / total } else { 0.0 };
    let u = u.scaled(s);
    let angles = AngleState::new(
        angles.phi[0].scaled(s),
        angles.phi[1].scaled(s),
        angles.dphi[0].scaled(s),
        angles.dphi[1].scaled(s),
    );
    Ok(SimulationState::from_parts(0.0, FlowState::from_velocity(&u), &angles))
}
