//! Driver loop with sampling, observers and failure reporting.

use super::{SchemeConfig, SimulationState, Stepper};
use crate::diagnostics::{EnergyReport, EnergyTracker};
use crate::error::{Error, Result};
use crate::multipliers::Coefficients;
use crate::physics::DEFAULT_CHART_MARGIN;

/// Called on every sampled state, including the initial and final ones.
pub trait Observer {
    fn observe(&mut self, state: &SimulationState) -> Result<()>;
}

impl<F: FnMut(&SimulationState) -> Result<()>> Observer for F {
    fn observe(&mut self, state: &SimulationState) -> Result<()> {
        self(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Sample the report every this many steps.
    pub sample_every: u64,
    /// Derivative order `N` in the energy functionals.
    pub diag_order: u32,
    /// Record `max |P_k Φ|` per resolved shell.
    pub shell_sups: bool,
    /// Stop with a chart violation once `|φ2|` comes within this of `π/2`.
    /// `None` disables the check.
    pub chart_margin: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { sample_every: 1, diag_order: 4, shell_sups: false, chart_margin: Some(DEFAULT_CHART_MARGIN) }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: SimulationState,
    pub report: EnergyReport,
}

/// A failed run keeps everything recorded up to the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub report: EnergyReport,
    pub last_state: Option<SimulationState>,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (after {} samples)", self.error, self.report.len())
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Integrates from `state0.t` to `cfg.t_end`. The final step is shortened
/// to land on `t_end` exactly.
pub fn run(
    state0: SimulationState,
    cfg: &SchemeConfig,
    coeffs: &Coefficients,
    opts: &RunOptions,
    observers: &mut [&mut dyn Observer],
) -> std::result::Result<RunOutcome, RunFailure> {
    let grid = *state0.grid();
    let mut tracker = EnergyTracker::new(&grid, *coeffs, opts.diag_order, opts.shell_sups);
    let fail = |error: Error, tracker: EnergyTracker, last: Option<SimulationState>| RunFailure {
        error,
        report: tracker.into_report(),
        last_state: last,
    };
    if opts.sample_every == 0 {
        return Err(fail(Error::InvalidArgument("sample_every must be positive".into()), tracker, None));
    }
    let stepper = match Stepper::new(grid, *cfg, *coeffs) {
        Ok(s) => s,
        Err(e) => return Err(fail(e, tracker, None)),
    };

    let sample = |s: &SimulationState, tracker: &mut EnergyTracker, observers: &mut [&mut dyn Observer]| -> Result<()> {
        if let Some(margin) = opts.chart_margin {
            s.angles().check_chart(margin)?;
        }
        tracker.record(s);
        for o in observers.iter_mut() {
            o.observe(s)?;
        }
        Ok(())
    };

    let mut state = state0;
    if let Err(e) = sample(&state, &mut tracker, observers) {
        return Err(fail(e, tracker, Some(state)));
    }
    let steps = cfg.steps_from(state.t);
    let t0 = state.t;
    for n in 1..=steps {
        let last = n == steps;
        let next = if last {
            let h = cfg.t_end - state.t;
            if (h - cfg.dt).abs() <= 1e-12 * cfg.dt.max(1.0) {
                stepper.step(&state)
            } else {
                stepper.shortened(h).step(&state)
            }
        } else {
            stepper.step(&state)
        };
        let mut next = match next {
            Ok(s) => s,
            Err(e) => return Err(fail(e, tracker, Some(state))),
        };
        // Recompute t from the step count to avoid drift.
        next.t = if last { cfg.t_end } else { t0 + n as f64 * cfg.dt };
        tracker.accumulate(&next);
        state = next;
        if last || n % opts.sample_every == 0 {
            if let Err(e) = sample(&state, &mut tracker, observers) {
                return Err(fail(e, tracker, Some(state)));
            }
        }
    }
    Ok(RunOutcome { state, report: tracker.into_report() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid3;

    #[test]
    fn equilibrium_stays_put_and_lands_on_t_end() {
        let g = Grid3::new(8, 1.0).unwrap();
        let c = Coefficients::new(0.0, 1.0, 0.0).unwrap();
        let cfg = SchemeConfig::new(0.1, 0.35);
        let mut seen = 0usize;
        let mut count = |_: &SimulationState| -> Result<()> {
            seen += 1;
            Ok(())
        };
        let out = run(SimulationState::equilibrium(g), &cfg, &c, &RunOptions::default(), &mut [&mut count]).unwrap();
        assert_eq!(out.state.t, 0.35);
        assert_eq!(out.state.step, 4);
        assert_eq!(out.report.len(), 5);
        assert_eq!(seen, 5);
        assert!(out.report.e0.iter().all(|&e| e == 0.0));
    }
}
