//! Angle formulation: velocity forcing in divergence form, the remainder
//! terms of the stress expansion and the wave sources for `φ`.

use rayon::prelude::*;

use super::director::DirectorTendency;
use super::state::{check_phi2, AngleState, FlowState, Frame, DEFAULT_CHART_MARGIN};
use super::tensor::{forward_dealiased, forward_dealiased_all, pointwise_tensor, velocity_gradient, PhysTensor, TensorField3};
use crate::error::{Error, Result};
use crate::multipliers::{apply_diagonalizer, apply_lbar, apply_l, leray_project, Coefficients};
use crate::spectral::{to_real_batch, Axis, Grid3, SpectralField, VectorField3};

pub const DEFAULT_QUADRATURE_NODES: usize = 8;
const MAX_QUADRATURE_NODES: usize = 16;

/// Fewest Gauss–Legendre nodes whose error bound for the stress remainder
/// drops below `1e-17·|A|` when `|φ| ≤ max_angle`.
///
/// The integrand is a trigonometric polynomial of frequency at most 4 in
/// each angle, so its `2n`-th `s`-derivative is bounded by `(4√2·|φ|)^{2n}`,
/// and the `n`-node rule on `[0, 1]` carries `(n!)⁴ / ((2n+1)((2n)!)³)`.
pub fn quadrature_nodes_for(max_angle: f64) -> usize {
    if max_angle == 0.0 {
        return 1;
    }
    let rate = 4.0 * std::f64::consts::SQRT_2 * max_angle;
    let mut fact_n = 1.0f64;
    for n in 1..=MAX_QUADRATURE_NODES {
        fact_n *= n as f64;
        let fact_2n: f64 = (1..=2 * n).map(|k| k as f64).product();
        let bound = fact_n.powi(4) / ((2 * n + 1) as f64 * fact_2n.powi(3)) * rate.powi(2 * n as i32);
        if bound <= 1e-17 {
            return n;
        }
    }
    MAX_QUADRATURE_NODES
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Physical samples shared by the angle-system terms.
struct AngleFields {
    grid: Grid3,
    phi: [Vec<f64>; 2],
    /// `gphi[a][j] = ∂_j φ_a`
    gphi: [[Vec<f64>; 3]; 2],
    psi: [Vec<f64>; 2],
    gpsi: [[Vec<f64>; 3]; 2],
    u: [Vec<f64>; 3],
    /// `gu[i][j] = ∂_j u_i`
    gu: [[Vec<f64>; 3]; 3],
}

#[cfg(test)]
fn grad_real(f: &SpectralField) -> [Vec<f64>; 3] {
    Axis::ALL.map(|ax| f.differentiate(ax, 1).to_real())
}

/// `[∇f0, ∇f1]` sampled on the grid.
fn grad_real_pair(f: &[SpectralField; 2]) -> [[Vec<f64>; 3]; 2] {
    let d = f.each_ref().map(|p| Axis::ALL.map(|ax| p.differentiate(ax, 1)));
    let mut it = to_real_batch(&d.iter().flatten().collect::<Vec<_>>()).into_iter();
    [0, 1].map(|_| [0, 1, 2].map(|_| it.next().expect("six components")))
}

impl AngleFields {
    fn new(a: &AngleState, u: &VectorField3) -> Result<Self> {
        let grid = *a.grid();
        if !grid.same_as(u.grid()) {
            return Err(Error::GridMismatch);
        }
        let gphi = a.phi.each_ref().map(|p| Axis::ALL.map(|ax| p.differentiate(ax, 1)));
        let gpsi = a.dphi.each_ref().map(|p| Axis::ALL.map(|ax| p.differentiate(ax, 1)));
        let gu = velocity_gradient(u);
        let mut all: Vec<&SpectralField> = Vec::with_capacity(28);
        all.extend(a.phi.iter().chain(&a.dphi));
        all.extend(gphi.iter().flatten().chain(gpsi.iter().flatten()));
        all.extend(u.components().iter().chain(gu.iter().flatten()));
        let mut it = to_real_batch(&all).into_iter();
        let mut next = || it.next().expect("sized batch");
        let phi = [next(), next()];
        let psi = [next(), next()];
        let gphi = [[next(), next(), next()], [next(), next(), next()]];
        let gpsi = [[next(), next(), next()], [next(), next(), next()]];
        let u = [next(), next(), next()];
        let gu = [0, 1, 2].map(|_| [next(), next(), next()]);
        Ok(Self { grid, phi, gphi, psi, gpsi, u, gu })
    }

    fn len(&self) -> usize {
        self.grid.len()
    }

    /// `max |φ|` over the grid, `φ = (φ1, φ2)`.
    fn max_angle(&self) -> f64 {
        self.phi[0].par_iter().zip(self.phi[1].par_iter()).map(|(a, b)| a.hypot(*b)).reduce(|| 0.0, f64::max)
    }

    #[inline]
    fn strain(&self, p: usize) -> [[f64; 3]; 3] {
        [0, 1, 2].map(|i| [0, 1, 2].map(|j| 0.5 * (self.gu[i][j][p] + self.gu[j][i][p])))
    }

    /// `sin²φ2 ∂_i φ1 ∂_j φ1`
    fn err12_tensor(&self) -> PhysTensor {
        pointwise_tensor(self.len(), |p| {
            let s2 = self.phi[1][p].sin().powi(2);
            [0, 1, 2].map(|i| [0, 1, 2].map(|j| s2 * self.gphi[0][i][p] * self.gphi[0][j][p]))
        })
    }

    fn coupling_tensor(&self, c: &Coefficients) -> PhysTensor {
        pointwise_tensor(self.len(), |p| coupling_at(c, self.phi[0][p], self.phi[1][p], &self.strain(p)))
    }
}

/// Tensor `Q_ij` with `(∇⊗(φ⊗∇u))_i = Σ_j ∂_j Q_ij`, listing every term of
/// the two blocks.
///
/// ν1 block: `∂2(A11φ1) + ∂3(A11φ2) + 2∂1(φ1A12 + φ2A13)`, `∂1(A11φ1)`, `∂1(A11φ2)`.
///
/// ν5 block, row 1: `∂2(φ1A11) + ∂3(φ2A11) + ∂1(φ1A21 + φ2A31) + ∂_j(φ1A2j + φ2A3j)`;
/// row 2: `∂2(φ1A12) + ∂3(φ2A12) + ∂1(φ1A22 + φ2A32) + ∂_j(φ1A1j)`;
/// row 3: `∂2(φ1A13) + ∂3(φ2A13) + ∂1(φ1A23 + φ2A33) + ∂_j(φ2A1j)`.
#[inline]
fn coupling_at(c: &Coefficients, p1: f64, p2: f64, a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut q1 = [[0.0; 3]; 3];
    q1[0][0] = 2.0 * (p1 * a[0][1] + p2 * a[0][2]);
    q1[0][1] = a[0][0] * p1;
    q1[0][2] = a[0][0] * p2;
    q1[1][0] = a[0][0] * p1;
    q1[2][0] = a[0][0] * p2;

    let mut q5 = [[0.0; 3]; 3];
    // row 1
    q5[0][1] += p1 * a[0][0];
    q5[0][2] += p2 * a[0][0];
    q5[0][0] += p1 * a[1][0] + p2 * a[2][0];
    for j in 0..3 {
        q5[0][j] += p1 * a[1][j] + p2 * a[2][j];
    }
    // row 2
    q5[1][1] += p1 * a[0][1];
    q5[1][2] += p2 * a[0][1];
    q5[1][0] += p1 * a[1][1] + p2 * a[2][1];
    for j in 0..3 {
        q5[1][j] += p1 * a[0][j];
    }
    // row 3
    q5[2][1] += p1 * a[0][2];
    q5[2][2] += p2 * a[0][2];
    q5[2][0] += p1 * a[1][2] + p2 * a[2][2];
    for j in 0..3 {
        q5[2][j] += p2 * a[0][j];
    }

    [0, 1, 2].map(|i| [0, 1, 2].map(|j| c.nu1() * q1[i][j] + c.nu5() * q5[i][j]))
}

#[inline]
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn matvec(a: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [dot(a[0], v), dot(a[1], v), dot(a[2], v)]
}

/// Remainder tensor
/// `W_ij = ∫₀¹ (1-s) (φ·∂)² F_ij(sφ) ds` where
/// `F_ij(φ) = ν1 (dᵀAd) d_i d_j + ν5 (d_j (Ad)_i + d_i (Ad)_j)`
/// and `∂` are partials in the angle arguments.
///
/// Along the ray `γ(s) = d(sφ)` the integrand is `d²F/ds²`, expanded with
/// `γ' = φ_a ∂_a d` and `γ'' = φ_a φ_b ∂_ab d`.
fn err11_at(c: &Coefficients, phi: [f64; 2], a: &[[f64; 3]; 3], q: &(Vec<f64>, Vec<f64>)) -> [[f64; 3]; 3] {
    let mut w = [[0.0; 3]; 3];
    if phi == [0.0, 0.0] {
        return w;
    }
    let (nodes, weights) = q;
    for (&s, &wt) in nodes.iter().zip(weights) {
        let f = Frame::at(s * phi[0], s * phi[1]);
        let g = f.d;
        let g1 = [0, 1, 2].map(|k| phi[0] * f.d1[k] + phi[1] * f.d2[k]);
        let g2 = [0, 1, 2].map(|k| {
            phi[0] * phi[0] * f.d11[k] + 2.0 * phi[0] * phi[1] * f.d12[k] + phi[1] * phi[1] * f.d22[k]
        });
        let (ag, ag1, ag2) = (matvec(a, g), matvec(a, g1), matvec(a, g2));
        let s0 = dot(g, ag);
        let s1 = 2.0 * dot(g1, ag);
        let s2 = 2.0 * dot(g2, ag) + 2.0 * dot(g1, ag1);
        let factor = wt * (1.0 - s);
        for i in 0..3 {
            for j in i..3 {
                let f1 = s2 * g[i] * g[j]
                    + 2.0 * s1 * (g1[i] * g[j] + g[i] * g1[j])
                    + s0 * (g2[i] * g[j] + 2.0 * g1[i] * g1[j] + g[i] * g2[j]);
                let f5 = g2[j] * ag[i] + 2.0 * g1[j] * ag1[i] + g[j] * ag2[i] + g2[i] * ag[j]
                    + 2.0 * g1[i] * ag1[j]
                    + g[i] * ag2[j];
                w[i][j] += factor * (c.nu1() * f1 + c.nu5() * f5);
            }
        }
    }
    // `F` is symmetric, so is its remainder.
    for i in 1..3 {
        for j in 0..i {
            w[i][j] = w[j][i];
        }
    }
    w
}

/// The tensor `F_ij(φ)` of [`err11_at`] evaluated directly.
#[cfg(test)]
fn stress_profile(c: &Coefficients, phi: [f64; 2], a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let d = Frame::at(phi[0], phi[1]).d;
    super::tensor::sigma_at(c, d, a)
}

fn div_of(grid: Grid3, t: &PhysTensor) -> VectorField3 {
    TensorField3::from_physical(grid, t).divergence()
}

/// `∇⊗(φ⊗∇u)`: the part of `div σ` linear in `φ`.
pub fn quadratic_coupling(c: &Coefficients, a: &AngleState, u: &VectorField3) -> Result<VectorField3> {
    let f = AngleFields::new(a, u)?;
    Ok(div_of(f.grid, &f.coupling_tensor(c)))
}

/// `Err11_i = ∂_j W_ij` with the angle-space Taylor remainder `W` of the
/// Leslie stress, for a given symmetric strain `A`.
pub fn err11(c: &Coefficients, a: &AngleState, strain: &TensorField3) -> VectorField3 {
    let [p1, p2] = a.phi.each_ref().map(SpectralField::to_real);
    let max_angle = p1.iter().zip(&p2).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max);
    err11_with_nodes(c, a, strain, quadrature_nodes_for(max_angle))
}

pub fn err11_with_nodes(c: &Coefficients, a: &AngleState, strain: &TensorField3, nodes: usize) -> VectorField3 {
    let grid = *a.grid();
    let q = gauss_legendre_unit(nodes);
    let p = a.phi.each_ref().map(SpectralField::to_real);
    let ap = strain.to_physical();
    let w = pointwise_tensor(grid.len(), |i| {
        let aa = [0, 1, 2].map(|r| [0, 1, 2].map(|s| ap[r][s][i]));
        err11_at(c, [p[0][i], p[1][i]], &aa, &q)
    });
    div_of(grid, &w)
}

/// `Err12 = ∂_j(sin²φ2 ∇φ1 ∂_jφ1)`.
pub fn err12(a: &AngleState) -> VectorField3 {
    let grid = *a.grid();
    let f = AngleFields::new(a, &VectorField3::zeros(grid)).expect("same grid");
    div_of(grid, &f.err12_tensor())
}

/// `(2 tan φ2 (φ̇1φ̇2 - ∇φ1·∇φ2), ½ sin 2φ2 (-φ̇1² + |∇φ1|²))` with
/// `φ̇ = ∂tφ + u·∇φ`.
pub fn err2(a: &AngleState, u: &VectorField3) -> Result<[SpectralField; 2]> {
    let f = AngleFields::new(a, u)?;
    check_phi2(&f.grid, &f.phi[1], DEFAULT_CHART_MARGIN)?;
    let e = f.err2_phys();
    Ok(forward_dealiased_all(f.grid, [&e[0][..], &e[1]]))
}

impl AngleFields {
    #[inline]
    fn transport(&self, a: usize, p: usize) -> f64 {
        (0..3).map(|j| self.u[j][p] * self.gphi[a][j][p]).sum()
    }

    fn err2_phys(&self) -> [Vec<f64>; 2] {
        let vals: Vec<[f64; 2]> = (0..self.len())
            .into_par_iter()
            .map(|p| {
                let m1 = self.psi[0][p] + self.transport(0, p);
                let m2 = self.psi[1][p] + self.transport(1, p);
                let g11: f64 = (0..3).map(|j| self.gphi[0][j][p] * self.gphi[0][j][p]).sum();
                let g12: f64 = (0..3).map(|j| self.gphi[0][j][p] * self.gphi[1][j][p]).sum();
                let p2 = self.phi[1][p];
                [2.0 * p2.tan() * (m1 * m2 - g12), 0.5 * (2.0 * p2).sin() * (-m1 * m1 + g11)]
            })
            .collect();
        [0, 1].map(|c| vals.iter().map(|v| v[c]).collect())
    }
}

/// Output of [`rhs_angle_system`].
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTendency {
    /// `𝕌ℙN_u`: the nonlinear part of `∂t v = -Lv + 𝕌ℙN_u`.
    pub flow_nonlinear: VectorField3,
    /// `∂t u = -L̄u + ℙN_u`.
    pub du_dt: VectorField3,
    /// Sources `S_a` of `∂t²φ_a - Δφ_a = S_a`, equivalently of
    /// `∂tΦ_a = i|∇|Φ_a + S_a`.
    pub wave_source: [SpectralField; 2],
}

impl AngleTendency {
    /// `∂t v = -Lv + 𝕌ℙN_u`.
    pub fn dv_dt(&self, c: &Coefficients, f: &FlowState) -> VectorField3 {
        &self.flow_nonlinear - &apply_l(c, &f.v)
    }

    /// `∂t(∂tφ_a) = Δφ_a + S_a`.
    pub fn ddphi_dt(&self, a: &AngleState) -> [SpectralField; 2] {
        [0, 1].map(|k| &a.phi[k].laplacian() + &self.wave_source[k])
    }
}

/// Nonlinear velocity forcing `N_u` before projection:
/// `-u·∇u - Σ_j ∂_j(∇φ·∂_jφ) + ∇⊗(φ⊗∇u) + Err11 + Err12`.
fn velocity_forcing(c: &Coefficients, f: &AngleFields) -> VectorField3 {
    let grid = f.grid;
    let q = gauss_legendre_unit(quadrature_nodes_for(f.max_angle()));
    let total = pointwise_tensor(f.len(), |p| {
        let a = f.strain(p);
        let (p1, p2) = (f.phi[0][p], f.phi[1][p]);
        let s2 = p2.sin().powi(2);
        let qc = coupling_at(c, p1, p2, &a);
        let w = err11_at(c, [p1, p2], &a, &q);
        [0, 1, 2].map(|i| {
            [0, 1, 2].map(|j| {
                let g0 = f.gphi[0][i][p] * f.gphi[0][j][p];
                let g1 = f.gphi[1][i][p] * f.gphi[1][j][p];
                -(g0 + g1) + s2 * g0 + qc[i][j] + w[i][j]
            })
        })
    });
    let adv: Vec<[f64; 3]> = (0..f.len())
        .into_par_iter()
        .map(|p| [0, 1, 2].map(|i| (0..3).map(|j| f.u[j][p] * f.gu[i][j][p]).sum::<f64>()))
        .collect();
    let mut out = div_of(grid, &total);
    let adv: [Vec<f64>; 3] = [0, 1, 2].map(|i| adv.iter().map(|x| x[i]).collect());
    let adv = forward_dealiased_all(grid, [&adv[0][..], &adv[1], &adv[2]]);
    for (i, a) in adv.iter().enumerate() {
        out.component_mut(i).axpy(-1.0, a);
    }
    out
}

/// Tendencies of the angle system for the state `(v, φ, ∂tφ)`.
pub fn rhs_angle_system(c: &Coefficients, a: &AngleState, flow: &FlowState) -> Result<AngleTendency> {
    rhs_angle_system_with_velocity(c, a, &flow.velocity())
}

/// Same as [`rhs_angle_system`] with `u = 𝕌v` already reconstructed.
pub(crate) fn rhs_angle_system_with_velocity(c: &Coefficients, a: &AngleState, u: &VectorField3) -> Result<AngleTendency> {
    let f = AngleFields::new(a, u)?;
    check_phi2(&f.grid, &f.phi[1], DEFAULT_CHART_MARGIN)?;
    let grid = f.grid;

    let pn = leray_project(&velocity_forcing(c, &f));
    let flow_nonlinear = apply_diagonalizer(&pn);
    let du_dt = &pn - &apply_lbar(c, u);

    let dup = du_dt.to_real();
    let g: [Vec<f64>; 2] = [0, 1].map(|k| (0..f.len()).into_par_iter().map(|p| f.transport(k, p)).collect());
    let gg = forward_dealiased_all(grid, [&g[0][..], &g[1]]);
    let gg = grad_real_pair(&gg);
    let e2 = f.err2_phys();
    let wave_source = [0, 1].map(|k| {
        (0..f.len())
            .into_par_iter()
            .map(|p| {
                let mut s = e2[k][p];
                for j in 0..3 {
                    s -= dup[j][p] * f.gphi[k][j][p];
                    s -= 2.0 * f.u[j][p] * f.gpsi[k][j][p];
                    s -= f.u[j][p] * gg[k][j][p];
                }
                s
            })
            .collect::<Vec<f64>>()
    });
    let wave_source = forward_dealiased_all(grid, [&wave_source[0][..], &wave_source[1]]);

    Ok(AngleTendency { flow_nonlinear, du_dt, wave_source })
}

/// Pulls a director tendency back through the angle chart:
/// `∂t²φ1 = ∂1d·(∂t²d - H)/cos²φ2`, `∂t²φ2 = ∂2d·(∂t²d - H)` with
/// `H = ψ1²∂11d + 2ψ1ψ2∂12d + ψ2²∂22d` and `ψ = ∂tφ`.
pub fn pullback_director_tendency(a: &AngleState, k: &DirectorTendency) -> [SpectralField; 2] {
    let grid = *a.grid();
    let p = a.phi.each_ref().map(SpectralField::to_real);
    let q = a.dphi.each_ref().map(SpectralField::to_real);
    let acc = k.ddt_d_dt.to_real();
    let vals: Vec<[f64; 2]> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let f = Frame::at(p[0][i], p[1][i]);
            let (s1, s2) = (q[0][i], q[1][i]);
            let r = [0, 1, 2].map(|c| acc[c][i] - (s1 * s1 * f.d11[c] + 2.0 * s1 * s2 * f.d12[c] + s2 * s2 * f.d22[c]));
            let c2 = p[1][i].cos();
            [dot(f.d1, r) / (c2 * c2), dot(f.d2, r)]
        })
        .collect();
    [0, 1].map(|c| {
        let v: Vec<f64> = vals.iter().map(|x| x[c]).collect();
        forward_dealiased(grid, &v)
    })
}
