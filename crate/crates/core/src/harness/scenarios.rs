//! The four batch scenarios. Each writes its artifacts under the output
//! directory and returns a printable table plus an overall verdict.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::checks::{cross_check, halfwave_decay, heat_data, heat_shell_bound, heat_decay, operator_suite, Check};
use super::config::{RunConfig, Scenario};
use super::snapshot::Snapshot;
use crate::diagnostics::EnergyReport;
use crate::error::{Error, Result};
use crate::timestepper::{generate_initial_data, run, SimulationState};

/// Bound on the heat shell-bound excess in `verify-decay`.
pub const SHELL_BOUND_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub scenario: Scenario,
    pub pass: bool,
    /// Human-readable table for the terminal.
    pub table: String,
    pub artifacts: Vec<PathBuf>,
}

impl ScenarioOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            EXIT_VERIFICATION
        }
    }
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;
/// I/O and other failures outside the documented classes.
pub const EXIT_OTHER: i32 = 1;

/// Exit status for an error raised before or during a scenario.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config { .. }
        | Error::InvalidGrid(_)
        | Error::InadmissibleCoefficients { .. }
        | Error::EmptyBand { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidLocalization { .. }
        | Error::UnsupportedWord(_) => EXIT_CONFIG,
        Error::Divergence { .. } | Error::ChartViolation { .. } => EXIT_DIVERGENCE,
        Error::InvalidSeries(_) => EXIT_VERIFICATION,
        _ => EXIT_OTHER,
    }
}

/// Runs `scenario` with artifacts under `cfg.output.dir`.
pub fn execute(scenario: Scenario, cfg: &RunConfig) -> Result<ScenarioOutcome> {
    let out = cfg.output.dir.clone();
    fs::create_dir_all(&out)?;
    let echo = out.join("config.toml");
    fs::write(&echo, cfg.to_canonical_toml())?;
    let mut outcome = match scenario {
        Scenario::Simulate => simulate(cfg, &out),
        Scenario::VerifyOperators => verify_operators(cfg, &out),
        Scenario::VerifyDecay => verify_decay(cfg, &out),
        Scenario::CrossCheck => run_cross_check(cfg, &out),
    }?;
    outcome.artifacts.insert(0, echo);
    Ok(outcome)
}

fn write(path: PathBuf, contents: impl AsRef<[u8]>, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, contents)?;
    artifacts.push(path);
    Ok(())
}

fn write_json(path: PathBuf, value: &serde_json::Value, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(path, text, artifacts)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn run_summary(report: &EnergyReport, state: Option<&SimulationState>) -> serde_json::Value {
    let e00 = report.e0.first().copied().unwrap_or(f64::NAN);
    json!({
        "samples": report.len(),
        "t_final": state.map(|s| s.t),
        "steps": state.map(|s| s.step),
        "e0_initial": e00,
        "e0_final": report.e0.last(),
        "e0_max_ratio": max_of(&report.e0) / e00,
        "dissipation_integral": report.dissipation_integral.last(),
        "max_div_u": max_of(&report.div_u),
        "max_unit_norm_defect": max_of(&report.unit_norm_d),
        "max_phi_sup": max_of(&report.phi_sup),
    })
}

fn simulate(cfg: &RunConfig, out: &Path) -> Result<ScenarioOutcome> {
    let mut artifacts = Vec::new();
    let seed = cfg.initial.seed;
    let s0 = generate_initial_data(&cfg.initial, cfg.grid)?;
    let snap_dir = out.join("snapshots");
    let every = cfg.diagnostics.snapshot_every;
    if every > 0 {
        fs::create_dir_all(&snap_dir)?;
    }
    let mut written = Vec::new();
    let mut sample = 0u64;
    let mut snapshots = |s: &SimulationState| -> Result<()> {
        if every > 0 && sample.is_multiple_of(every) {
            let path = snap_dir.join(format!("step_{:010}.bin", s.step));
            Snapshot::new(s.clone(), cfg.coefficients, seed).save(&path)?;
            written.push(path);
        }
        sample += 1;
        Ok(())
    };
    let result = run(s0, &cfg.scheme_config(), &cfg.coefficients, &cfg.run_options(), &mut [&mut snapshots]);
    artifacts.append(&mut written);

    let (report, last, error) = match result {
        Ok(o) => (o.report, Some(o.state), None),
        Err(f) => (f.report, f.last_state, Some(f.error)),
    };
    write(out.join("series.csv"), report.to_csv(), &mut artifacts)?;
    if let Some(s) = &last {
        let name = if error.is_none() { "final.bin" } else { "last_good.bin" };
        let path = out.join(name);
        Snapshot::new(s.clone(), cfg.coefficients, seed).save(&path)?;
        artifacts.push(path);
    }
    let mut summary = run_summary(&report, last.as_ref());
    summary["scenario"] = json!("simulate");
    summary["status"] = json!(if error.is_none() { "completed" } else { "failed" });
    summary["error"] = json!(error.as_ref().map(ToString::to_string));
    write_json(out.join("summary.json"), &summary, &mut artifacts)?;

    if let Some(e) = error {
        return Err(e);
    }
    let mut table = String::new();
    for key in ["t_final", "steps", "e0_initial", "e0_final", "e0_max_ratio", "dissipation_integral", "max_div_u", "max_unit_norm_defect"] {
        let _ = writeln!(table, "{key:<22} {}", summary[key]);
    }
    Ok(ScenarioOutcome { scenario: Scenario::Simulate, pass: true, table, artifacts })
}

fn check_table(checks: &[Check]) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "{:<6} {:<30} {:>12} {:>4} {:>10}", "status", "check", "value", "", "tolerance");
    for c in checks {
        let _ = writeln!(
            t,
            "{:<6} {:<30} {:>12.3e} {:>4} {:>10.1e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.relation,
            c.tolerance
        );
    }
    t
}

fn verify_operators(cfg: &RunConfig, out: &Path) -> Result<ScenarioOutcome> {
    let o = &cfg.verify_operators;
    let checks = operator_suite(cfg.grid, &cfg.coefficients, cfg.initial.seed, o.random_triples, o.wave_vectors);
    let pass = checks.iter().all(|c| c.pass);
    let mut artifacts = Vec::new();
    write_json(
        out.join("operators.json"),
        &json!({ "scenario": "verify-operators", "pass": pass, "checks": checks }),
        &mut artifacts,
    )?;
    Ok(ScenarioOutcome { scenario: Scenario::VerifyOperators, pass, table: check_table(&checks), artifacts })
}

fn verify_decay(cfg: &RunConfig, out: &Path) -> Result<ScenarioOutcome> {
    let d = &cfg.verify_decay;
    let mut artifacts = Vec::new();
    let heat = heat_decay(&cfg.coefficients, d)?;
    write(out.join("heat_series.csv"), heat.to_csv(), &mut artifacts)?;
    let excess = heat_shell_bound(&cfg.coefficients, &heat_data(d)?)?;
    let wave = halfwave_decay(d)?;
    write(out.join("wave_series.csv"), wave.to_csv(), &mut artifacts)?;

    let heat_ok = heat.fit.passes(d.tolerance);
    let wave_ok = wave.fit.passes(d.tolerance);
    let bound = Check::at_most("heat shell-bound excess", excess, SHELL_BOUND_TOL);
    let pass = heat_ok && wave_ok && bound.pass;
    write_json(
        out.join("decay.json"),
        &json!({
            "scenario": "verify-decay",
            "pass": pass,
            "tolerance": d.tolerance,
            "fits": [heat.fit, wave.fit],
            "shell_bound": bound,
        }),
        &mut artifacts,
    )?;

    let mut table = String::new();
    let _ = writeln!(table, "{:<6} {:<28} {:>9} {:>9} {:>9} {:>16}", "status", "quantity", "slope", "stderr", "expected", "window");
    for (fit, ok) in [(&heat.fit, heat_ok), (&wave.fit, wave_ok)] {
        let _ = writeln!(
            table,
            "{:<6} {:<28} {:>9.4} {:>9.1e} {:>9.2} {:>16}",
            if ok { "PASS" } else { "FAIL" },
            fit.quantity,
            fit.slope,
            fit.stderr,
            fit.reference_exponent.unwrap_or(f64::NAN),
            format!("[{:.3}, {:.3}]", fit.window[0], fit.window[1])
        );
    }
    table.push_str(&check_table(std::slice::from_ref(&bound)));
    Ok(ScenarioOutcome { scenario: Scenario::VerifyDecay, pass, table, artifacts })
}

fn run_cross_check(cfg: &RunConfig, out: &Path) -> Result<ScenarioOutcome> {
    let s0 = generate_initial_data(&cfg.initial, cfg.grid)?;
    let report = cross_check(&s0, &cfg.coefficients, &cfg.cross_check)?;
    let mut artifacts = Vec::new();
    let mut csv = String::from("dt,absolute,relative\n");
    for r in &report.rows {
        let _ = writeln!(csv, "{:?},{:?},{:?}", r.dt, r.absolute, r.relative);
    }
    write(out.join("cross_check.csv"), csv, &mut artifacts)?;
    write_json(
        out.join("cross_check.json"),
        &json!({ "scenario": "cross-check", "t_end": cfg.cross_check.t_end, "report": report }),
        &mut artifacts,
    )?;

    let mut table = String::new();
    let _ = writeln!(table, "{:>10} {:>12} {:>12} {:>8}", "dt", "|Δd|", "|Δd|/|d|", "order");
    for (i, r) in report.rows.iter().enumerate() {
        let order = if i == 0 { String::from("-") } else { format!("{:.3}", report.orders[i - 1]) };
        let _ = writeln!(table, "{:>10} {:>12.3e} {:>12.3e} {:>8}", r.dt, r.absolute, r.relative, order);
    }
    let _ = writeln!(
        table,
        "{} worst relative {:.3e} (≤ {:.0e}), min order {:.3} (≥ {})",
        if report.pass { "PASS" } else { "FAIL" },
        report.worst_relative,
        report.tolerance,
        report.orders.iter().copied().fold(f64::INFINITY, f64::min),
        report.min_order
    );
    Ok(ScenarioOutcome { scenario: Scenario::CrossCheck, pass: report.pass, table, artifacts })
}
