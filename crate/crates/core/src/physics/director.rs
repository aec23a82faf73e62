//! Director formulation `(u, d, ∂t d)` with the unit-length constraint
//! enforced through the Lagrange multiplier `Γ`.

use rayon::prelude::*;

use super::state::DirectorState;
use super::tensor::{forward_dealiased, forward_dealiased_all, gradient_real, pointwise_tensor, sigma_at, to_real_all, TensorField3};
use crate::error::{Error, Result};
use crate::multipliers::{leray_project, Coefficients};
use crate::spectral::{Grid3, SpectralField, VectorField3};

/// Time derivatives of `(u, d, ∂t d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectorTendency {
    pub du_dt: VectorField3,
    pub dd_dt: VectorField3,
    pub ddt_d_dt: VectorField3,
}

type Phys3 = [Vec<f64>; 3];
type Phys33 = [[Vec<f64>; 3]; 3];

fn gradient_phys(v: &VectorField3) -> Phys33 {
    // g[k][j] = ∂_j v_k
    gradient_real(v)
}

fn forward_vec(grid: Grid3, v: Phys3) -> VectorField3 {
    VectorField3::new(forward_dealiased_all(grid, [&v[0][..], &v[1], &v[2]]))
}

fn pointwise_vec(len: usize, f: impl Fn(usize) -> [f64; 3] + Sync + Send) -> Phys3 {
    let vals: Vec<[f64; 3]> = (0..len).into_par_iter().map(f).collect();
    [0, 1, 2].map(|c| vals.iter().map(|v| v[c]).collect())
}

/// `Γ = -|∂t d + u·∇d|² + |∇d|²`, pointwise then dealiased.
pub fn lagrange_gamma(s: &DirectorState, u: &VectorField3) -> SpectralField {
    let grid = *s.grid();
    let gd = gradient_phys(&s.d);
    let e = s.dt_d.to_real();
    let up = u.to_real();
    let vals: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|p| gamma_at(p, &gd, &e, &up))
        .collect();
    forward_dealiased(grid, &vals)
}

#[inline]
fn gamma_at(p: usize, gd: &Phys33, e: &Phys3, u: &Phys3) -> f64 {
    let mut m2 = 0.0;
    let mut g2 = 0.0;
    for k in 0..3 {
        let mut m = e[k][p];
        for j in 0..3 {
            m += u[j][p] * gd[k][j][p];
            g2 += gd[k][j][p] * gd[k][j][p];
        }
        m2 += m * m;
    }
    g2 - m2
}

/// Tendencies of the director system with pressure eliminated by `ℙ`:
///
/// `∂t u = ℙ(-u·∇u + ν4/2 Δu - div(∇d⊙∇d) + div σ)`,
/// `∂t e = Δd + Γd - ∂t u·∇d - 2u·∇e - u·∇(u·∇d)` with `e = ∂t d`.
pub fn rhs_director(c: &Coefficients, s: &DirectorState, u: &VectorField3) -> Result<DirectorTendency> {
    let grid = *s.grid();
    if !grid.same_as(u.grid()) {
        return Err(Error::GridMismatch);
    }
    let n = grid.len();
    let [u1, u2, u3, d1, d2, d3, e1, e2, e3] = to_real_all([
        u.component(0),
        u.component(1),
        u.component(2),
        s.d.component(0),
        s.d.component(1),
        s.d.component(2),
        s.dt_d.component(0),
        s.dt_d.component(1),
        s.dt_d.component(2),
    ]);
    let (up, dp, ep) = ([u1, u2, u3], [d1, d2, d3], [e1, e2, e3]);
    let gu = gradient_phys(u);
    let gd = gradient_phys(&s.d);
    let ge = gradient_phys(&s.dt_d);

    let adv = pointwise_vec(n, |p| [0, 1, 2].map(|i| (0..3).map(|j| up[j][p] * gu[i][j][p]).sum()));
    let stress = pointwise_tensor(n, |p| {
        let a = [0, 1, 2].map(|i| [0, 1, 2].map(|j| 0.5 * (gu[i][j][p] + gu[j][i][p])));
        let d = [dp[0][p], dp[1][p], dp[2][p]];
        let mut m = sigma_at(c, d, &a);
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] -= (0..3).map(|k| gd[k][i][p] * gd[k][j][p]).sum::<f64>();
            }
        }
        m
    });
    let mut force = TensorField3::from_physical(grid, &stress).divergence();
    force.axpy(-1.0, &forward_vec(grid, adv));
    force.axpy(0.5 * c.nu4(), &u.map(SpectralField::laplacian));
    let du_dt = leray_project(&force);

    let dup = du_dt.to_real();
    let transport = pointwise_vec(n, |p| [0, 1, 2].map(|k| (0..3).map(|j| up[j][p] * gd[k][j][p]).sum()));
    let gt = gradient_phys(&forward_vec(grid, transport));
    let rest = pointwise_vec(n, |p| {
        let gamma = gamma_at(p, &gd, &ep, &up);
        [0, 1, 2].map(|k| {
            let mut r = gamma * dp[k][p];
            for j in 0..3 {
                r -= dup[j][p] * gd[k][j][p];
                r -= 2.0 * up[j][p] * ge[k][j][p];
                r -= up[j][p] * gt[k][j][p];
            }
            r
        })
    });
    let mut ddt_d_dt = forward_vec(grid, rest);
    ddt_d_dt += &s.d.map(SpectralField::laplacian);

    Ok(DirectorTendency { du_dt, dd_dt: s.dt_d.clone(), ddt_d_dt })
}

/// Full state of the director formulation.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectorFlow {
    pub t: f64,
    pub u: VectorField3,
    pub director: DirectorState,
}

impl DirectorFlow {
    fn axpy(&self, h: f64, k: &DirectorTendency) -> DirectorFlow {
        let mut out = self.clone();
        out.u.axpy(h, &k.du_dt);
        out.director.d.axpy(h, &k.dd_dt);
        out.director.dt_d.axpy(h, &k.ddt_d_dt);
        out.t += h;
        out
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.director.d.is_finite() && self.director.dt_d.is_finite()
    }
}

/// One classical fourth-order Runge–Kutta step of the director system.
///
/// Fully explicit, so `dt` must resolve both the viscous and the wave time
/// scales of the grid. Used as an independent reference for the angle
/// formulation.
pub fn director_rk4_step(c: &Coefficients, s: &DirectorFlow, dt: f64) -> Result<DirectorFlow> {
    let f = |x: &DirectorFlow| rhs_director(c, &x.director, &x.u);
    let k1 = f(s)?;
    let k2 = f(&s.axpy(0.5 * dt, &k1))?;
    let k3 = f(&s.axpy(0.5 * dt, &k2))?;
    let k4 = f(&s.axpy(dt, &k3))?;
    let mut out = s.clone();
    for (w, k) in [(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)] {
        let h = dt * w / 6.0;
        out.u.axpy(h, &k.du_dt);
        out.director.d.axpy(h, &k.dd_dt);
        out.director.dt_d.axpy(h, &k.ddt_d_dt);
    }
    out.t = s.t + dt;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid3 {
        Grid3::new(16, 1.0).unwrap()
    }

    #[test]
    fn equilibrium_is_stationary() {
        let g = grid();
        let c = Coefficients::new(0.5, 1.0, 0.2).unwrap();
        let s = DirectorState { d: VectorField3::from_fn(g, |_| [1.0, 0.0, 0.0]), dt_d: VectorField3::zeros(g) };
        let k = rhs_director(&c, &s, &VectorField3::zeros(g)).unwrap();
        assert!(k.du_dt.l2_norm() < 1e-14);
        assert!(k.ddt_d_dt.l2_norm() < 1e-14);
    }

    #[test]
    fn static_director_tendency() {
        let g = Grid3::new(32, 1.0).unwrap();
        let c = Coefficients::new(0.5, 1.0, 0.2).unwrap();
        let d = VectorField3::from_fn(g, |x| {
            let (p1, p2) = (0.3 * x[1].sin(), 0.2 * x[2].cos());
            [p1.cos() * p2.cos(), p1.sin() * p2.cos(), p2.sin()]
        });
        let s = DirectorState { d: d.clone(), dt_d: VectorField3::zeros(g) };
        let u = VectorField3::zeros(g);
        let gamma = lagrange_gamma(&s, &u);
        let k = rhs_director(&c, &s, &u).unwrap();
        // Tangency of the constrained flow: d·(Δd + Γd) = 0 when |d| = 1 and ∂t d = 0.
        let dp = d.to_real();
        let tp = k.ddt_d_dt.to_real();
        let worst = (0..g.len())
            .map(|p| (dp[0][p] * tp[0][p] + dp[1][p] * tp[1][p] + dp[2][p] * tp[2][p]).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "tangency defect {worst}");
        assert!(gamma.sup_norm() > 0.0);
    }
}
