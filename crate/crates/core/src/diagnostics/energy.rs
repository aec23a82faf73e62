//! Energy functionals, the dissipation integral and the run report.

use serde::{Deserialize, Serialize};

use super::constraints::constraint_residuals;
use crate::multipliers::{lp_project, operator_l, resolved_shells, Coefficients, ShellRange};
use crate::spectral::{Grid3, SpectralField, VectorField3};
use crate::timestepper::SimulationState;

/// `Σ_{|n| = N} Π_i ξ_i^{2 n_i}`, enumerating the multi-indices.
pub fn multi_index_weight(xi: [f64; 3], order: u32) -> f64 {
    let sq = xi.map(|x| x * x);
    let mut total = 0.0;
    for n1 in 0..=order {
        for n2 in 0..=(order - n1) {
            let n3 = order - n1 - n2;
            total += sq[0].powi(n1 as i32) * sq[1].powi(n2 as i32) * sq[2].powi(n3 as i32);
        }
    }
    total
}

/// Weight of `Σ_{|n| ∈ {0, N}} ‖∂ⁿf‖²` per mode.
#[inline]
fn functional_weight(xi: [f64; 3], order: u32) -> f64 {
    if order == 0 {
        1.0
    } else {
        1.0 + multi_index_weight(xi, order)
    }
}

fn weighted_sq(f: &SpectralField, order: u32, extra: impl Fn([f64; 3]) -> f64 + Sync) -> f64 {
    let grid = *f.grid();
    let c = f.coeffs();
    let s = crate::spectral::ordered_sum(c.len(), |idx| {
        let sq = c[idx].norm_sqr();
        if sq == 0.0 {
            return 0.0;
        }
        let xi = grid.wave_vector(idx);
        sq * functional_weight(xi, order) * extra(xi)
    });
    s * grid.volume()
}

/// `Σ_{|n| ∈ {0,N}} ‖∂ⁿv‖²`.
pub fn velocity_sum(v: &VectorField3, order: u32) -> f64 {
    v.components().iter().map(|f| weighted_sq(f, order, |_| 1.0)).sum()
}

/// `Σ_{|n| ∈ {0,N}} ‖∂ⁿ L^{1/2} v‖²`, the dissipation rate.
pub fn dissipation_rate(c: &Coefficients, v: &VectorField3, order: u32) -> f64 {
    (0..3)
        .map(|k| weighted_sq(v.component(k), order, |xi| operator_l(c, xi)[k]))
        .sum()
}

/// `Σ_{|n| ∈ {0,N}} ‖∂ⁿΦ‖²`.
pub fn wave_sum(phi: &[SpectralField; 2], order: u32) -> f64 {
    phi.iter().map(|f| weighted_sq(f, order, |_| 1.0)).sum()
}

/// Instantaneous part of `E⁰`: `½Σ‖∂ⁿv‖² + ½Σ‖∂ⁿΦ‖²`. The running
/// dissipation integral is added by [`EnergyTracker`].
pub fn energy_e0(state: &SimulationState, diag_order: u32) -> f64 {
    0.5 * velocity_sum(&state.flow.v, diag_order) + 0.5 * wave_sum(&state.wave.phi, diag_order)
}

/// Time series collected during a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub diag_order: u32,
    pub shell_range: Option<ShellRange>,
    pub times: Vec<f64>,
    /// `E⁰(t)` including the dissipation integral.
    pub e0: Vec<f64>,
    /// `½‖u‖²`
    pub kinetic: Vec<f64>,
    /// `∫₀ᵗ Σ‖∂ⁿL^{1/2}v‖²`, trapezoid rule over every step.
    pub dissipation_integral: Vec<f64>,
    pub dissipation_rate: Vec<f64>,
    /// `½‖Φ‖²`
    pub wave_energy: Vec<f64>,
    /// `max_x |Φ(x)|`
    pub phi_sup: Vec<f64>,
    /// `max_x |P_k Φ(x)|` per shell of `shell_range`, one row per sample.
    pub shell_sup: Vec<Vec<f64>>,
    pub div_u: Vec<f64>,
    pub unit_norm_d: Vec<f64>,
    pub mean_u: Vec<f64>,
}

impl EnergyReport {
    pub const CSV_COLUMNS: [&'static str; 10] = [
        "t",
        "E0",
        "kinetic",
        "dissipation_integral",
        "dissipation_rate",
        "wave_energy",
        "phi_sup",
        "div_u",
        "unit_norm_d",
        "mean_u",
    ];

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Series as CSV: the fixed columns, then one `shell_sup_k<k>` column per
    /// shell. Floats use Rust's shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut header: Vec<String> = Self::CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
        if let Some(r) = self.shell_range {
            header.extend(r.iter().map(|k| format!("shell_sup_k{k}")));
        }
        let mut out = header.join(",");
        out.push('\n');
        for i in 0..self.len() {
            let mut row = vec![
                self.times[i],
                self.e0[i],
                self.kinetic[i],
                self.dissipation_integral[i],
                self.dissipation_rate[i],
                self.wave_energy[i],
                self.phi_sup[i],
                self.div_u[i],
                self.unit_norm_d[i],
                self.mean_u[i],
            ];
            if let Some(shells) = self.shell_sup.get(i) {
                row.extend(shells);
            }
            out.push_str(&row.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// Accumulates the dissipation integral every step and samples the report.
#[derive(Debug, Clone)]
pub struct EnergyTracker {
    coeffs: Coefficients,
    diag_order: u32,
    with_shells: bool,
    last: Option<(f64, f64)>,
    integral: f64,
    report: EnergyReport,
}

impl EnergyTracker {
    pub fn new(grid: &Grid3, coeffs: Coefficients, diag_order: u32, with_shells: bool) -> Self {
        let report = EnergyReport {
            diag_order,
            shell_range: with_shells.then(|| resolved_shells(grid)),
            ..EnergyReport::default()
        };
        Self { coeffs, diag_order, with_shells, last: None, integral: 0.0, report }
    }

    /// Trapezoid update of the dissipation integral; call after every step.
    pub fn accumulate(&mut self, state: &SimulationState) -> f64 {
        let rate = dissipation_rate(&self.coeffs, &state.flow.v, self.diag_order);
        if let Some((t0, r0)) = self.last {
            self.integral += 0.5 * (state.t - t0) * (r0 + rate);
        }
        self.last = Some((state.t, rate));
        rate
    }

    pub fn dissipation_integral(&self) -> f64 {
        self.integral
    }

    /// Appends one sample. `accumulate` must already have seen `state`.
    pub fn record(&mut self, state: &SimulationState) {
        let rate = match self.last {
            Some((t, r)) if t == state.t => r,
            _ => self.accumulate(state),
        };
        let r = &mut self.report;
        let u = state.velocity();
        r.times.push(state.t);
        r.e0.push(energy_e0(state, self.diag_order) + self.integral);
        r.kinetic.push(0.5 * u.l2_norm().powi(2));
        r.dissipation_integral.push(self.integral);
        r.dissipation_rate.push(rate);
        r.wave_energy.push(0.5 * state.wave.l2_norm().powi(2));
        r.phi_sup.push(wave_sup(&state.wave.phi));
        if self.with_shells {
            let range = r.shell_range.expect("set with shells");
            r.shell_sup.push(
                range
                    .iter()
                    .map(|k| wave_sup(&[lp_project(&state.wave.phi[0], k), lp_project(&state.wave.phi[1], k)]))
                    .collect(),
            );
        }
        let c = constraint_residuals(state);
        r.div_u.push(c.div_u);
        r.unit_norm_d.push(c.unit_norm_d);
        r.mean_u.push(c.mean_u);
    }

    pub fn report(&self) -> &EnergyReport {
        &self.report
    }

    pub fn into_report(self) -> EnergyReport {
        self.report
    }
}

/// `max_x (|Φ1|² + |Φ2|²)^{1/2}`.
pub fn wave_sup(phi: &[SpectralField; 2]) -> f64 {
    let a = phi[0].to_physical();
    let b = phi[1].to_physical();
    a.iter().zip(&b).map(|(x, y)| (x.norm_sqr() + y.norm_sqr()).sqrt()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_weight_examples() {
        assert_eq!(multi_index_weight([1.0, 2.0, 3.0], 0), 1.0);
        // |n| = 1: ξ1² + ξ2² + ξ3²
        assert_eq!(multi_index_weight([1.0, 2.0, 3.0], 1), 14.0);
        // |n| = 2: Σ_{i≤j} ξi²ξj²
        let (a, b, c) = (1.0, 4.0, 9.0);
        let want = a * a + b * b + c * c + a * b + a * c + b * c;
        assert_eq!(multi_index_weight([1.0, 2.0, 3.0], 2), want);
    }

    #[test]
    fn equilibrium_has_zero_energy() {
        let g = Grid3::new(8, 1.0).unwrap();
        assert_eq!(energy_e0(&SimulationState::equilibrium(g), 4), 0.0);
    }
}
