//! TOML run configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipliers::Coefficients;
use crate::physics::DEFAULT_CHART_MARGIN;
use crate::spectral::Grid3;
use crate::timestepper::{InitialDataSpec, RunOptions, Scheme, SchemeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Simulate,
    VerifyOperators,
    VerifyDecay,
    CrossCheck,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Simulate => "simulate",
            Scenario::VerifyOperators => "verify-operators",
            Scenario::VerifyDecay => "verify-decay",
            Scenario::CrossCheck => "cross-check",
        }
    }
}

/// Time stepping section; `dt` defaults to `0.5·spacing·cfl_safety`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub t_end: f64,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default = "default_reprojection")]
    pub reprojection_period: u64,
    #[serde(default = "yes")]
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
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default = "one")]
    pub sample_every: u64,
    #[serde(default = "default_order")]
    pub diag_order: u32,
    #[serde(default)]
    pub shell_sups: bool,
    /// Write a snapshot every this many samples; `0` writes only the final
    /// state.
    #[serde(default)]
    pub snapshot_every: u64,
    #[serde(default = "default_margin")]
    pub chart_margin: f64,
}

fn one() -> u64 {
    1
}
fn default_order() -> u32 {
    4
}
fn default_margin() -> f64 {
    DEFAULT_CHART_MARGIN
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            sample_every: one(),
            diag_order: default_order(),
            shell_sups: false,
            snapshot_every: 0,
            chart_margin: default_margin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: default_dir() }
    }
}

/// Heat and half-wave decay measurements of `verify-decay`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayConfig {
    #[serde(default = "decay_points")]
    pub points_per_axis: usize,
    #[serde(default = "decay_box")]
    pub box_length: f64,
    /// Width of the spectrally defined Gaussian used for the heat test.
    #[serde(default = "one_f")]
    pub heat_sigma: f64,
    #[serde(default = "heat_window")]
    pub heat_window: [f64; 2],
    /// Shell `k` of the half-wave data.
    #[serde(default)]
    pub wave_shell: i32,
    /// Fit window for the half-wave test; the default starts one wavelength
    /// of the shell's lowest frequency in and ends at 80% of the wrap time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave_window: Option<[f64; 2]>,
    #[serde(default = "decay_samples")]
    pub samples: usize,
    /// Allowed `|slope - reference|`.
    #[serde(default = "decay_tol")]
    pub tolerance: f64,
}

fn decay_points() -> usize {
    128
}
fn decay_box() -> f64 {
    16.0
}
fn one_f() -> f64 {
    1.0
}
fn heat_window() -> [f64; 2] {
    [1.0, 8.0]
}
fn decay_samples() -> usize {
    16
}
fn decay_tol() -> f64 {
    0.15
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            points_per_axis: decay_points(),
            box_length: decay_box(),
            heat_sigma: one_f(),
            heat_window: heat_window(),
            wave_shell: 0,
            wave_window: None,
            samples: decay_samples(),
            tolerance: decay_tol(),
        }
    }
}

/// Sample sizes of `verify-operators`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorsConfig {
    #[serde(default = "operator_triples")]
    pub random_triples: usize,
    #[serde(default = "operator_vectors")]
    pub wave_vectors: usize,
}

fn operator_triples() -> usize {
    100
}
fn operator_vectors() -> usize {
    10_000
}

impl Default for OperatorsConfig {
    fn default() -> Self {
        Self { random_triples: operator_triples(), wave_vectors: operator_vectors() }
    }
}

/// Director versus angle formulation runs of `cross-check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossCheckConfig {
    #[serde(default = "cross_dts")]
    pub dts: Vec<f64>,
    #[serde(default = "one_f")]
    pub t_end: f64,
    /// Bound on the relative L² discrepancy of `d`.
    #[serde(default = "cross_tol")]
    pub tolerance: f64,
    /// Minimum observed order under `dt` halving.
    #[serde(default = "cross_order")]
    pub min_order: f64,
}

fn cross_dts() -> Vec<f64> {
    vec![0.04, 0.02, 0.01]
}
fn cross_tol() -> f64 {
    1e-5
}
fn cross_order() -> f64 {
    2.0
}

impl Default for CrossCheckConfig {
    fn default() -> Self {
        Self { dts: cross_dts(), t_end: one_f(), tolerance: cross_tol(), min_order: cross_order() }
    }
}

/// Raw file layout; spans are kept where validation needs the grid.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    scenario: Option<Scenario>,
    grid: Grid3,
    coefficients: Coefficients,
    initial: toml::Spanned<InitialDataSpec>,
    scheme: toml::Spanned<SchemeSection>,
    #[serde(default)]
    diagnostics: Option<toml::Spanned<DiagnosticsConfig>>,
    #[serde(default)]
    output: OutputConfig,
    #[serde(default)]
    verify_operators: OperatorsConfig,
    #[serde(default)]
    verify_decay: DecayConfig,
    #[serde(default)]
    cross_check: Option<toml::Spanned<CrossCheckConfig>>,
}

/// Validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    pub grid: Grid3,
    pub coefficients: Coefficients,
    pub initial: InitialDataSpec,
    pub scheme: SchemeSection,
    pub diagnostics: DiagnosticsConfig,
    pub output: OutputConfig,
    pub verify_operators: OperatorsConfig,
    pub verify_decay: DecayConfig,
    pub cross_check: CrossCheckConfig,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn at(text: &str, span: std::ops::Range<usize>, message: impl Into<String>) -> Error {
    Error::Config { line: line_of(text, span.start), message: message.into() }
}

/// Parses and validates a configuration. Errors carry the 1-based line of
/// the offending key or table.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| line_of(text, s.start));
        Error::Config { line, message: e.message().trim().to_string() }
    })?;
    let grid = raw.grid;

    let initial_span = raw.initial.span();
    let initial = raw.initial.into_inner();
    let [kmin, kmax] = initial.band;
    if !(initial.epsilon0 >= 0.0 && initial.epsilon0.is_finite()) {
        return Err(at(text, initial_span, format!("epsilon0 must be nonnegative, got {}", initial.epsilon0)));
    }
    if !(kmin >= 0.0 && kmax >= kmin && kmax.is_finite()) {
        return Err(at(text, initial_span, format!("band [{kmin}, {kmax}] must satisfy 0 <= kmin <= kmax")));
    }

    let scheme_span = raw.scheme.span();
    let scheme = raw.scheme.into_inner();
    scheme_config(&scheme, &grid).validate(&grid).map_err(|e| at(text, scheme_span.clone(), e.to_string()))?;

    let diagnostics = match raw.diagnostics {
        Some(d) => {
            let span = d.span();
            let d = d.into_inner();
            if d.sample_every == 0 {
                return Err(at(text, span, "sample_every must be positive"));
            }
            if !(0.0..std::f64::consts::FRAC_PI_2).contains(&d.chart_margin) {
                return Err(at(text, span, format!("chart_margin must lie in [0, π/2), got {}", d.chart_margin)));
            }
            d
        }
        None => DiagnosticsConfig::default(),
    };

    let cross_check = match raw.cross_check {
        Some(c) => {
            let span = c.span();
            let c = c.into_inner();
            if c.dts.len() < 2 || c.dts.iter().any(|&h| !(h > 0.0)) {
                return Err(at(text, span, "cross_check.dts needs at least two positive steps"));
            }
            c
        }
        None => CrossCheckConfig::default(),
    };

    Ok(RunConfig {
        scenario: raw.scenario,
        grid,
        coefficients: raw.coefficients,
        initial,
        scheme,
        diagnostics,
        output: raw.output,
        verify_operators: raw.verify_operators,
        verify_decay: raw.verify_decay,
        cross_check,
    })
}

fn scheme_config(s: &SchemeSection, grid: &Grid3) -> SchemeConfig {
    SchemeConfig {
        dt: s.dt.unwrap_or_else(|| SchemeConfig::default_dt(grid, s.cfl_safety)),
        t_end: s.t_end,
        scheme: s.scheme,
        cfl_safety: s.cfl_safety,
        reprojection_period: s.reprojection_period,
        nonlinear: s.nonlinear,
    }
}

impl RunConfig {
    pub fn scheme_config(&self) -> SchemeConfig {
        scheme_config(&self.scheme, &self.grid)
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            sample_every: self.diagnostics.sample_every,
            diag_order: self.diagnostics.diag_order,
            shell_sups: self.diagnostics.shell_sups,
            chart_margin: Some(self.diagnostics.chart_margin),
        }
    }

    /// Canonical TOML with every default spelled out, `dt` resolved.
    pub fn to_canonical_toml(&self) -> String {
        let mut resolved = self.clone();
        resolved.scheme.dt = Some(self.scheme_config().dt);
        toml::to_string(&resolved).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[grid]
points_per_axis = 16
box_length = 1.0

[coefficients]
nu1 = 0.5
nu4 = 1.0
nu5 = 0.2

[initial]
epsilon0 = 1e-3
band = [1.0, 3.0]
profile = "random-band"

[scheme]
t_end = 1.0
"#;

    #[test]
    fn minimal_config_fills_defaults_and_echoes_canonically() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.diagnostics, DiagnosticsConfig::default());
        assert_eq!(cfg.scheme.scheme, Scheme::Etd2);
        assert_eq!(cfg.grid.dealias_fraction(), Grid3::DEFAULT_DEALIAS);
        let echo = cfg.to_canonical_toml();
        let again = parse_config(&echo).unwrap();
        assert_eq!(again.to_canonical_toml(), echo);
        assert_eq!(again.scheme_config(), cfg.scheme_config());
    }

    fn config_error(text: &str) -> (usize, String) {
        match parse_config(text) {
            Err(Error::Config { line, message }) => (line, message),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn negative_nu4_names_the_violated_inequality() {
        let (line, msg) = config_error(&MINIMAL.replace("nu4 = 1.0", "nu4 = -1.0"));
        assert!(msg.contains("ν4>0"), "{msg}");
        // The inequality couples several keys, so the table header is reported.
        assert_eq!(line, 6);
    }

    #[test]
    fn boundary_nu1_is_rejected() {
        let (_, msg) = config_error(&MINIMAL.replace("nu1 = 0.5", "nu1 = -2.4"));
        assert!(msg.contains("ν1>-2(ν4+ν5)"), "{msg}");
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_line() {
        let (line, msg) = config_error(&MINIMAL.replace("t_end = 1.0", "t_end = 1.0\nstep_size = 3"));
        assert!(msg.contains("step_size"), "{msg}");
        assert_eq!(line, 18);
        let (_, msg) = config_error(&format!("{MINIMAL}\n[extra]\nx = 1\n"));
        assert!(msg.contains("extra"), "{msg}");
    }

    #[test]
    fn cfl_violation_points_at_scheme_table() {
        let (line, msg) = config_error(&MINIMAL.replace("t_end = 1.0", "t_end = 1.0\ndt = 5.0"));
        assert!(msg.contains("advective limit"), "{msg}");
        assert_eq!(line, 16);
    }

    #[test]
    fn invalid_grid_is_reported() {
        let (line, msg) = config_error(&MINIMAL.replace("points_per_axis = 16", "points_per_axis = 15"));
        assert!(msg.contains("even"), "{msg}");
        assert_eq!(line, 2);
    }
}
