//! Exponential time differencing for `∂t v = -Lv + N_v`, `∂tΦ = i|∇|Φ + S`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SimulationState;
use crate::error::{Error, Result};
use crate::multipliers::{apply_diagonalizer, leray_project, operator_l, Coefficients};
use crate::physics::{rhs_angle_system_with_velocity, FlowState, NormalizedWave};
use crate::spectral::{Grid3, SpectralField, VectorField3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Exponential second-order Runge–Kutta (Cox–Matthews ETD2RK).
    #[serde(rename = "ETD2", alias = "etd2")]
    Etd2,
    /// Exponential midpoint rule.
    #[serde(rename = "ETD-midpoint", alias = "etd-midpoint")]
    EtdMidpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default = "default_reprojection")]
    pub reprojection_period: u64,
    /// When false only the linear propagators act; used to isolate them.
    #[serde(default = "default_nonlinear")]
    pub nonlinear: bool,
}

fn default_scheme() -> Scheme {
    Scheme::Etd2
}
fn default_cfl() -> f64 {
    0.5
}
fn default_reprojection() -> u64 {
    10
}
fn default_nonlinear() -> bool {
    true
}

impl SchemeConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self {
            dt,
            t_end,
            scheme: default_scheme(),
            cfl_safety: default_cfl(),
            reprojection_period: default_reprojection(),
            nonlinear: true,
        }
    }

    /// `0.5 · spacing · cfl_safety`.
    pub fn default_dt(grid: &Grid3, cfl_safety: f64) -> f64 {
        0.5 * grid.spacing() * cfl_safety
    }

    pub fn validate(&self, grid: &Grid3) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidArgument(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::InvalidArgument(format!("cfl_safety must lie in (0, 1], got {}", self.cfl_safety)));
        }
        if self.reprojection_period == 0 {
            return Err(Error::InvalidArgument("reprojection_period must be positive".into()));
        }
        let limit = self.cfl_safety * grid.spacing();
        if self.dt > limit {
            return Err(Error::InvalidArgument(format!(
                "dt = {} exceeds the advective limit cfl_safety·spacing = {limit}",
                self.dt
            )));
        }
        Ok(())
    }

    /// Number of steps to reach `t_end` from `t0`, the last one possibly short.
    pub fn steps_from(&self, t0: f64) -> u64 {
        let span = self.t_end - t0;
        if span <= 0.0 {
            0
        } else {
            (span / self.dt - 1e-9).ceil().max(1.0) as u64
        }
    }
}

/// `φ1(z) = (e^z - 1)/z` and `φ2(z) = (e^z - 1 - z)/z²`, with Taylor
/// series near the origin.
pub fn phi_functions(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 1e-2 {
        let z2 = z * z;
        let z3 = z2 * z;
        let z4 = z3 * z;
        let p1 = 1.0 + z / 2.0 + z2 / 6.0 + z3 / 24.0 + z4 / 120.0 + z4 * z / 720.0;
        let p2 = 0.5 + z / 6.0 + z2 / 24.0 + z3 / 120.0 + z4 / 720.0 + z4 * z / 5040.0;
        (p1, p2)
    } else {
        let e = z.exp();
        ((e - 1.0) / z, (e - 1.0 - z) / (z * z))
    }
}

#[derive(Debug, Clone)]
struct ExpTable {
    e: Vec<Complex64>,
    p1: Vec<Complex64>,
    p2: Vec<Complex64>,
    e_half: Vec<Complex64>,
    p1_half: Vec<Complex64>,
}

impl ExpTable {
    fn build(grid: &Grid3, h: f64, lambda: impl Fn([f64; 3]) -> Complex64 + Sync) -> Self {
        let rows: Vec<[Complex64; 5]> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let l = lambda(grid.wave_vector(idx));
                let (p1, p2) = phi_functions(l * h);
                let (p1h, _) = phi_functions(l * (0.5 * h));
                [(l * h).exp(), p1, p2, (l * (0.5 * h)).exp(), p1h]
            })
            .collect();
        let col = |c: usize| rows.iter().map(|r| r[c]).collect();
        Self { e: col(0), p1: col(1), p2: col(2), e_half: col(3), p1_half: col(4) }
    }
}

/// Nonlinear terms `(N_v, S_1, S_2)`.
struct Forcing {
    flow: VectorField3,
    wave: [SpectralField; 2],
}

/// Precomputed exponential tables for one `(grid, dt, coefficients)`.
pub struct Stepper {
    grid: Grid3,
    cfg: SchemeConfig,
    coeffs: Coefficients,
    /// Tables for v components 1–2 and 3, and for Φ.
    v12: ExpTable,
    v3: ExpTable,
    wave: ExpTable,
}

fn combine(parts: &[(&[Complex64], &[Complex64])], grid: Grid3) -> SpectralField {
    let len = grid.len();
    let coeffs: Vec<Complex64> = (0..len)
        .into_par_iter()
        .map(|i| parts.iter().fold(Complex64::new(0.0, 0.0), |acc, (w, x)| acc + w[i] * x[i]))
        .collect();
    SpectralField::from_coeffs(grid, coeffs).expect("sized by grid")
}

impl Stepper {
    pub fn new(grid: Grid3, cfg: SchemeConfig, coeffs: Coefficients) -> Result<Self> {
        cfg.validate(&grid)?;
        Ok(Self::with_step(grid, cfg, coeffs, cfg.dt))
    }

    fn with_step(grid: Grid3, cfg: SchemeConfig, coeffs: Coefficients, h: f64) -> Self {
        let c = coeffs;
        Self {
            grid,
            cfg,
            coeffs,
            v12: ExpTable::build(&grid, h, |xi| Complex64::new(-operator_l(&c, xi)[0], 0.0)),
            v3: ExpTable::build(&grid, h, |xi| Complex64::new(-operator_l(&c, xi)[2], 0.0)),
            wave: ExpTable::build(&grid, h, |xi| {
                Complex64::new(0.0, (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt())
            }),
        }
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    fn table(&self, component: usize) -> &ExpTable {
        if component == 2 {
            &self.v3
        } else {
            &self.v12
        }
    }

    fn forcing(&self, s: &SimulationState) -> Result<Forcing> {
        let angles = s.angles();
        let u = s.flow.velocity();
        let k = rhs_angle_system_with_velocity(&self.coeffs, &angles, &u)?;
        Ok(Forcing { flow: k.flow_nonlinear, wave: k.wave_source })
    }

    /// `y ↦ E·y + Σ h·w·N` per component, `E` over the full or half step and
    /// the weights `w` selected from the tables.
    fn propagate(
        &self,
        s: &SimulationState,
        half: bool,
        terms: &[(f64, &Forcing, fn(&ExpTable) -> &[Complex64])],
    ) -> (VectorField3, [SpectralField; 2]) {
        let g = self.grid;
        fn e(t: &ExpTable, half: bool) -> &[Complex64] {
            if half {
                &t.e_half
            } else {
                &t.e
            }
        }
        let scaled = |t: &ExpTable, sel: fn(&ExpTable) -> &[Complex64], h: f64| -> Vec<Complex64> {
            sel(t).iter().map(|w| w * h).collect()
        };
        let v = [0, 1, 2].map(|c| {
            let t = self.table(c);
            let weights: Vec<Vec<Complex64>> = terms.iter().map(|(h, _, sel)| scaled(t, *sel, *h)).collect();
            let mut parts: Vec<(&[Complex64], &[Complex64])> = vec![(e(t, half), s.flow.v.component(c).coeffs())];
            for (w, (_, f, _)) in weights.iter().zip(terms) {
                parts.push((w, f.flow.component(c).coeffs()));
            }
            combine(&parts, g)
        });
        let weights: Vec<Vec<Complex64>> = terms.iter().map(|(h, _, sel)| scaled(&self.wave, *sel, *h)).collect();
        let w = [0, 1].map(|a| {
            let mut parts: Vec<(&[Complex64], &[Complex64])> = vec![(e(&self.wave, half), s.wave.phi[a].coeffs())];
            for (wt, (_, f, _)) in weights.iter().zip(terms) {
                parts.push((wt, f.wave[a].coeffs()));
            }
            combine(&parts, g)
        });
        let [v0, v1, v2] = v;
        (VectorField3::new([v0, v1, v2]), w)
    }

    fn assemble(&self, s: &SimulationState, t: f64, v: VectorField3, w: [SpectralField; 2], mean_phi: [f64; 2]) -> SimulationState {
        let mean_dphi = [w[0].mean().re, w[1].mean().re];
        SimulationState {
            t,
            step: s.step,
            flow: FlowState { v },
            wave: NormalizedWave { phi: w },
            mean_phi,
            mean_dphi,
        }
    }

    fn linear_only(&self, s: &SimulationState, h: f64) -> SimulationState {
        let (v, w) = self.propagate(s, false, &[]);
        let mean_phi = [0, 1].map(|a| s.mean_phi[a] + h * s.mean_dphi[a]);
        self.assemble(s, s.t + h, v, w, mean_phi)
    }

    fn advance(&self, s: &SimulationState) -> Result<SimulationState> {
        let h = self.cfg.dt;
        if !self.cfg.nonlinear {
            return Ok(self.linear_only(s, h));
        }
        let n0 = self.forcing(s)?;
        match self.cfg.scheme {
            Scheme::Etd2 => {
                let (va, wa) = self.propagate(s, false, &[(h, &n0, |t| &t.p1)]);
                let mean_a = [0, 1].map(|a| s.mean_phi[a] + h * s.mean_dphi[a]);
                let sa = self.assemble(s, s.t + h, va, wa, mean_a);
                let na = self.forcing(&sa)?;
                let diff = Forcing {
                    flow: &na.flow - &n0.flow,
                    wave: [&na.wave[0] - &n0.wave[0], &na.wave[1] - &n0.wave[1]],
                };
                let (v, w) = self.propagate(s, false, &[(h, &n0, |t| &t.p1), (h, &diff, |t| &t.p2)]);
                let mean_phi = [0, 1].map(|a| s.mean_phi[a] + 0.5 * h * (s.mean_dphi[a] + sa.mean_dphi[a]));
                Ok(self.assemble(s, s.t + h, v, w, mean_phi))
            }
            Scheme::EtdMidpoint => {
                let (va, wa) = self.propagate(s, true, &[(0.5 * h, &n0, |t| &t.p1_half)]);
                let mean_a = [0, 1].map(|a| s.mean_phi[a] + 0.5 * h * s.mean_dphi[a]);
                let sa = self.assemble(s, s.t + 0.5 * h, va, wa, mean_a);
                let na = self.forcing(&sa)?;
                let (v, w) = self.propagate(s, false, &[(h, &na, |t| &t.p1)]);
                let mean_phi = [0, 1].map(|a| s.mean_phi[a] + h * sa.mean_dphi[a]);
                Ok(self.assemble(s, s.t + h, v, w, mean_phi))
            }
        }
    }

    /// One step of size `dt`: propagation, mean removal, periodic
    /// re-projection and a finiteness check.
    pub fn step(&self, s: &SimulationState) -> Result<SimulationState> {
        let mut next = self.advance(s)?;
        next.step = s.step + 1;
        for c in 0..3 {
            next.flow.v.component_mut(c).coeffs_mut()[0] = Complex64::new(0.0, 0.0);
        }
        if next.step % self.cfg.reprojection_period == 0 {
            next.flow.v = apply_diagonalizer(&leray_project(&apply_diagonalizer(&next.flow.v)));
        }
        if let Some(field) = next.first_non_finite() {
            return Err(Error::Divergence { step: next.step as usize, time: next.t, field: field.to_string() });
        }
        Ok(next)
    }

    /// A stepper for a shortened final step.
    pub(crate) fn shortened(&self, h: f64) -> Stepper {
        let mut cfg = self.cfg;
        cfg.dt = h;
        Stepper::with_step(self.grid, cfg, self.coeffs, h)
    }
}

/// Convenience wrapper building a [`Stepper`] for a single step.
pub fn step(state: &SimulationState, cfg: &SchemeConfig, c: &Coefficients) -> Result<SimulationState> {
    Stepper::new(*state.grid(), *cfg, *c)?.step(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_functions_are_continuous_across_the_switch() {
        for z in [Complex64::new(0.0099, 0.0), Complex64::new(0.0, -0.0099), Complex64::new(-0.007, 0.007)] {
            let (a1, a2) = phi_functions(z);
            let e = z.exp();
            let (b1, b2) = ((e - 1.0) / z, (e - 1.0 - z) / (z * z));
            assert!((a1 - b1).norm() < 1e-13);
            assert!((a2 - b2).norm() < 1e-10);
        }
        assert_eq!(phi_functions(Complex64::new(0.0, 0.0)), (Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)));
    }

    #[test]
    fn step_counts() {
        let mut c = SchemeConfig::new(0.1, 1.0);
        assert_eq!(c.steps_from(0.0), 10);
        c.t_end = 1.05;
        assert_eq!(c.steps_from(0.0), 11);
        assert_eq!(c.steps_from(2.0), 0);
    }

    #[test]
    fn cfl_limit_is_enforced() {
        let g = Grid3::new(16, 1.0).unwrap();
        let cfg = SchemeConfig::new(1.0, 2.0);
        assert!(cfg.validate(&g).is_err());
        assert!(SchemeConfig::new(0.1, 2.0).validate(&g).is_ok());
    }
}
