//! Periodic 3-D grid, transforms, field algebra, differentiation,
//! dealiasing and norms.

mod fft;
mod field;
pub(crate) use field::ordered_sum;
mod grid;

pub use field::{dealias_product, from_real_batch, to_real_batch, Axis, SpectralField, VectorField3};
pub use grid::Grid3;

/// Forward transform of real samples (`1/n³` normalization).
pub fn transform_forward(physical: &[f64], grid: Grid3) -> crate::Result<SpectralField> {
    SpectralField::from_real(grid, physical)
}

/// Inverse transform (no normalization factor).
pub fn transform_inverse(f: &SpectralField) -> Vec<num_complex::Complex64> {
    f.to_physical()
}
