//! State types of the three formulations and the exact maps between them.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multipliers::{apply_diagonalizer, abs_grad};
use crate::spectral::{Grid3, SpectralField, VectorField3};

/// Default distance kept between `|φ2|` and `π/2`.
pub const DEFAULT_CHART_MARGIN: f64 = 0.2;

/// Polar angles of the director, `d = (cos φ1 cos φ2, sin φ1 cos φ2, sin φ2)`,
/// and their partial time derivatives `∂tφ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleState {
    pub phi: [SpectralField; 2],
    pub dphi: [SpectralField; 2],
}

impl AngleState {
    pub fn new(phi1: SpectralField, phi2: SpectralField, dphi1: SpectralField, dphi2: SpectralField) -> Self {
        Self { phi: [phi1, phi2], dphi: [dphi1, dphi2] }
    }

    pub fn zeros(grid: Grid3) -> Self {
        let z = SpectralField::zeros(grid);
        Self::new(z.clone(), z.clone(), z.clone(), z)
    }

    pub fn grid(&self) -> &Grid3 {
        self.phi[0].grid()
    }

    /// Fails if `|φ2| ≥ π/2 - margin` at any collocation point.
    pub fn check_chart(&self, margin: f64) -> Result<()> {
        check_phi2(self.grid(), &self.phi[1].to_real(), margin)
    }

    pub fn is_finite(&self) -> bool {
        self.phi.iter().chain(self.dphi.iter()).all(SpectralField::is_finite)
    }
}

pub(crate) fn check_phi2(grid: &Grid3, phi2: &[f64], margin: f64) -> Result<()> {
    let limit = std::f64::consts::FRAC_PI_2 - margin;
    match phi2.iter().position(|p| !(p.abs() < limit)) {
        None => Ok(()),
        Some(idx) => Err(Error::ChartViolation {
            index: grid.unflat(idx),
            detail: format!("|φ2| = {} exceeds π/2 - {margin}", phi2[idx].abs()),
        }),
    }
}

/// Director field and its partial time derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectorState {
    pub d: VectorField3,
    pub dt_d: VectorField3,
}

impl DirectorState {
    pub fn grid(&self) -> &Grid3 {
        self.d.grid()
    }

    /// `max | |d| - 1 |` over collocation points.
    pub fn unit_norm_defect(&self) -> f64 {
        let d = self.d.to_real();
        (0..d[0].len())
            .into_par_iter()
            .map(|i| ((d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i]).sqrt() - 1.0).abs())
            .reduce(|| 0.0, f64::max)
    }

    /// `max |d·∂t d|` over collocation points.
    pub fn tangency_defect(&self) -> f64 {
        let d = self.d.to_real();
        let e = self.dt_d.to_real();
        (0..d[0].len())
            .into_par_iter()
            .map(|i| (d[0][i] * e[0][i] + d[1][i] * e[1][i] + d[2][i] * e[2][i]).abs())
            .reduce(|| 0.0, f64::max)
    }
}

/// Diagonalized velocity `v = 𝕌u`.
///
/// `v` is stored as a general complex field: the symbol of `𝕌` is odd in
/// `(ξ2, ξ3)`, so the last two components of `v` are imaginary in physical
/// space even though `u` is real.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub v: VectorField3,
}

impl FlowState {
    pub fn zeros(grid: Grid3) -> Self {
        Self { v: VectorField3::zeros(grid) }
    }

    pub fn from_velocity(u: &VectorField3) -> Self {
        Self { v: apply_diagonalizer(u) }
    }

    /// `u = 𝕌v`, projected onto real fields.
    pub fn velocity(&self) -> VectorField3 {
        apply_diagonalizer(&self.v).map(SpectralField::real_part)
    }

    pub fn grid(&self) -> &Grid3 {
        self.v.grid()
    }
}

/// `Φ_a = ∂tφ_a + i|∇|φ_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedWave {
    pub phi: [SpectralField; 2],
}

impl NormalizedWave {
    pub fn from_angles(a: &AngleState) -> Self {
        let mk = |p: &SpectralField, dp: &SpectralField| {
            let mut out = abs_grad(p).scaled_complex(Complex64::new(0.0, 1.0));
            out += dp;
            out
        };
        Self { phi: [mk(&a.phi[0], &a.dphi[0]), mk(&a.phi[1], &a.dphi[1])] }
    }

    /// Recovers `(φ, ∂tφ)`. The `ξ = 0` mode of `φ` is not encoded in `Φ` and
    /// is supplied through `mean_phi`.
    pub fn to_angles(&self, mean_phi: [f64; 2]) -> AngleState {
        let split = |w: &SpectralField, mean: f64| {
            let grid = *w.grid();
            let wbar = w.conjugate_field();
            let ks = grid.wavenumbers();
            let n = grid.n();
            let (a, b) = (w.coeffs(), wbar.coeffs());
            let (phi, dphi): (Vec<Complex64>, Vec<Complex64>) = (0..grid.len())
                .into_par_iter()
                .map(|idx| {
                    let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                    let r = (ks[i] * ks[i] + ks[j] * ks[j] + ks[k] * ks[k]).sqrt();
                    let psi = (a[idx] + b[idx]) * 0.5;
                    let phi = if r == 0.0 {
                        Complex64::new(mean, 0.0)
                    } else {
                        (a[idx] - b[idx]) / Complex64::new(0.0, 2.0 * r)
                    };
                    (phi, psi)
                })
                .unzip();
            (
                SpectralField::from_coeffs(grid, phi).expect("sized by grid"),
                SpectralField::from_coeffs(grid, dphi).expect("sized by grid"),
            )
        };
        let (p1, d1) = split(&self.phi[0], mean_phi[0]);
        let (p2, d2) = split(&self.phi[1], mean_phi[1]);
        AngleState::new(p1, p2, d1, d2)
    }

    pub fn grid(&self) -> &Grid3 {
        self.phi[0].grid()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.phi[0].l2_norm().powi(2) + self.phi[1].l2_norm().powi(2)).sqrt()
    }
}

/// `d(φ)` and the angle partials `∂1d`, `∂2d`, `∂11d`, `∂12d`, `∂22d`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frame {
    pub d: [f64; 3],
    pub d1: [f64; 3],
    pub d2: [f64; 3],
    pub d11: [f64; 3],
    pub d12: [f64; 3],
    pub d22: [f64; 3],
}

impl Frame {
    #[inline]
    pub fn at(p1: f64, p2: f64) -> Self {
        let (s1, c1) = p1.sin_cos();
        let (s2, c2) = p2.sin_cos();
        Frame {
            d: [c1 * c2, s1 * c2, s2],
            d1: [-s1 * c2, c1 * c2, 0.0],
            d2: [-c1 * s2, -s1 * s2, c2],
            d11: [-c1 * c2, -s1 * c2, 0.0],
            d12: [s1 * s2, -c1 * s2, 0.0],
            d22: [-c1 * c2, -s1 * c2, -s2],
        }
    }
}

fn vector_from_real(grid: Grid3, comps: [Vec<f64>; 3]) -> VectorField3 {
    let [a, b, c] = comps.map(|v| SpectralField::from_real(grid, &v).expect("sized by grid"));
    VectorField3::new([a, b, c])
}

/// Pointwise `d(φ)` and `∂t d = ∂1d ∂tφ1 + ∂2d ∂tφ2`.
pub fn angles_to_director(a: &AngleState) -> Result<DirectorState> {
    a.check_chart(DEFAULT_CHART_MARGIN)?;
    let grid = *a.grid();
    let [p1, p2] = a.phi.each_ref().map(SpectralField::to_real);
    let [q1, q2] = a.dphi.each_ref().map(SpectralField::to_real);
    let vals: Vec<([f64; 3], [f64; 3])> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let f = Frame::at(p1[i], p2[i]);
            let e = [0, 1, 2].map(|c| f.d1[c] * q1[i] + f.d2[c] * q2[i]);
            (f.d, e)
        })
        .collect();
    let split = |sel: fn(&([f64; 3], [f64; 3])) -> [f64; 3]| -> [Vec<f64>; 3] {
        [0, 1, 2].map(|c| vals.iter().map(|v| sel(v)[c]).collect())
    };
    Ok(DirectorState {
        d: vector_from_real(grid, split(|v| v.0)),
        dt_d: vector_from_real(grid, split(|v| v.1)),
    })
}

/// Inverse chart `φ1 = atan2(d2, d1)`, `φ2 = asin(d3)`; requires `d1 > 0`.
pub fn director_to_angles(s: &DirectorState) -> Result<AngleState> {
    let grid = *s.grid();
    let d = s.d.to_real();
    let e = s.dt_d.to_real();
    if let Some(idx) = d[0].iter().position(|&x| !(x > 0.0)) {
        return Err(Error::ChartViolation {
            index: grid.unflat(idx),
            detail: format!("d1 = {} is not positive", d[0][idx]),
        });
    }
    let vals: Vec<[f64; 4]> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (d1, d2, d3) = (d[0][i], d[1][i], d[2][i]);
            let p1 = d2.atan2(d1);
            let p2 = d3.clamp(-1.0, 1.0).asin();
            let q1 = (d1 * e[1][i] - d2 * e[0][i]) / (d1 * d1 + d2 * d2);
            let q2 = e[2][i] / p2.cos();
            [p1, p2, q1, q2]
        })
        .collect();
    let field = |c: usize| {
        let v: Vec<f64> = vals.iter().map(|x| x[c]).collect();
        SpectralField::from_real(grid, &v).expect("sized by grid")
    };
    Ok(AngleState::new(field(0), field(1), field(2), field(3)))
}
