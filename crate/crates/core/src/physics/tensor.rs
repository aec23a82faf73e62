//! Rank-2 tensor fields, strain and Leslie stress.

use rayon::prelude::*;

use crate::multipliers::Coefficients;
use crate::spectral::{from_real_batch, to_real_batch, Axis, Grid3, SpectralField, VectorField3};

/// Physical samples of a 3×3 tensor field, `t[i][j][point]`.
pub(crate) type PhysTensor = [[Vec<f64>; 3]; 3];

/// 3×3 tensor of spectral fields, `T_ij = c[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField3 {
    c: [[SpectralField; 3]; 3],
}

impl TensorField3 {
    pub fn new(c: [[SpectralField; 3]; 3]) -> Self {
        Self { c }
    }

    pub fn get(&self, i: usize, j: usize) -> &SpectralField {
        &self.c[i][j]
    }

    pub fn grid(&self) -> &Grid3 {
        self.c[0][0].grid()
    }

    /// Forward transform of physical samples followed by dealiasing.
    pub(crate) fn from_physical(grid: Grid3, t: &PhysTensor) -> Self {
        let flat: Vec<&[f64]> = t.iter().flatten().map(Vec::as_slice).collect();
        let mut it = from_real_batch(grid, &flat).into_iter();
        let mut next = || {
            let mut f = it.next().expect("nine components");
            f.dealias_in_place();
            f
        };
        let c = [0, 1, 2].map(|_| [0, 1, 2].map(|_| next()));
        Self { c }
    }

    pub(crate) fn to_physical(&self) -> PhysTensor {
            let mut it = to_real_batch(&self.c.iter().flatten().collect::<Vec<_>>()).into_iter();
        [0, 1, 2].map(|_| [0, 1, 2].map(|_| it.next().expect("nine components")))
    }

    /// Row divergence `(∇·T)_i = Σ_j ∂_j T_ij`.
    pub fn divergence(&self) -> VectorField3 {
        let row = |i: usize| SpectralField::divergence_of([&self.c[i][0], &self.c[i][1], &self.c[i][2]]);
        VectorField3::new([row(0), row(1), row(2)])
    }

    pub fn transpose(&self) -> TensorField3 {
        Self { c: [0, 1, 2].map(|i| [0, 1, 2].map(|j| self.c[j][i].clone())) }
    }

    /// `sqrt(Σ_ij ‖T_ij‖²)`.
    pub fn l2_norm(&self) -> f64 {
        self.c.iter().flatten().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> SpectralField {
        let mut t = self.c[0][0].clone();
        t += &self.c[1][1];
        t += &self.c[2][2];
        t
    }
}

pub(crate) fn forward_dealiased(grid: Grid3, v: &[f64]) -> SpectralField {
    let mut f = SpectralField::from_real(grid, v).expect("sized by grid");
    f.dealias_in_place();
    f
}

/// [`forward_dealiased`] for several arrays at once, paired into complex FFTs.
pub(crate) fn forward_dealiased_all<const N: usize>(grid: Grid3, v: [&[f64]; N]) -> [SpectralField; N] {
    let mut out = from_real_batch(grid, &v);
    out.iter_mut().for_each(SpectralField::dealias_in_place);
    out.try_into().expect("one field per array")
}

/// Physical samples of several real fields, paired into complex FFTs.
pub(crate) fn to_real_all<const N: usize>(f: [&SpectralField; N]) -> [Vec<f64>; N] {
    to_real_batch(&f).try_into().expect("one array per field")
}

/// `g[i][j] = ∂_j v_i` sampled on the grid.
pub(crate) fn gradient_real(v: &VectorField3) -> PhysTensor {
    let g = velocity_gradient(v);
    let mut it = to_real_batch(&g.iter().flatten().collect::<Vec<_>>()).into_iter();
    [0, 1, 2].map(|_| [0, 1, 2].map(|_| it.next().expect("nine components")))
}

/// Velocity gradient `G[i][j] = ∂_j u_i`.
pub(crate) fn velocity_gradient(u: &VectorField3) -> [[SpectralField; 3]; 3] {
    [0, 1, 2].map(|i| Axis::ALL.map(|ax| u.component(i).differentiate(ax, 1)))
}

/// `A_ij = ½(∂_j u_i + ∂_i u_j)` and `B_ij = ½(∂_j u_i - ∂_i u_j)`.
pub fn strain_tensors(u: &VectorField3) -> (TensorField3, TensorField3) {
    let g = velocity_gradient(u);
    let a = [0, 1, 2].map(|i| [0, 1, 2].map(|j| (&g[i][j] + &g[j][i]).scaled(0.5)));
    let b = [0, 1, 2].map(|i| [0, 1, 2].map(|j| (&g[i][j] - &g[j][i]).scaled(0.5)));
    (TensorField3::new(a), TensorField3::new(b))
}

/// Pointwise Leslie stress
/// `σ_ji = ν1 d_k d_p A_kp d_i d_j + ν5 (d_j d_k A_ki + d_i d_k A_kj)`.
#[inline]
pub(crate) fn sigma_at(c: &Coefficients, d: [f64; 3], a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let ad = [0, 1, 2].map(|i| a[i][0] * d[0] + a[i][1] * d[1] + a[i][2] * d[2]);
    let dad = d[0] * ad[0] + d[1] * ad[1] + d[2] * ad[2];
    let mut s = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            s[i][j] = c.nu1() * dad * d[i] * d[j] + c.nu5() * (d[j] * ad[i] + d[i] * ad[j]);
        }
    }
    s
}

/// Leslie stress assembled pointwise and dealiased. Symmetric in `(i, j)`.
pub fn stress_sigma(c: &Coefficients, d: &VectorField3, a: &TensorField3) -> TensorField3 {
    let grid = *d.grid();
    let dp = d.to_real();
    let ap = a.to_physical();
    let out = pointwise_tensor(grid.len(), |p| {
        let dd = [dp[0][p], dp[1][p], dp[2][p]];
        let aa = [0, 1, 2].map(|i| [0, 1, 2].map(|j| ap[i][j][p]));
        sigma_at(c, dd, &aa)
    });
    TensorField3::from_physical(grid, &out)
}

/// Evaluates a tensor-valued pointwise map over `len` points.
pub(crate) fn pointwise_tensor(len: usize, f: impl Fn(usize) -> [[f64; 3]; 3] + Sync + Send) -> PhysTensor {
    let vals: Vec<[[f64; 3]; 3]> = (0..len).into_par_iter().map(f).collect();
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| vals.iter().map(|v| v[i][j]).collect()))
}
