//! Python module `hyperlc`: grids, coefficients, initial data, time
//! stepping, diagnostics, snapshots and the batch scenarios.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hyperlc::diagnostics::{decay_fit as fit_series, energy_e0};
use hyperlc::harness::{self, Scenario, Snapshot};
use hyperlc::multipliers::symbols::leray;
use hyperlc::multipliers::{operator_l, u_diagonalizer};
use hyperlc::physics::angles_to_director;
use hyperlc::spectral::Grid3;
use hyperlc::timestepper::{self as ts, InitialDataSpec, Profile, RunOptions, SchemeConfig, SimulationState};
use hyperlc::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config { .. }
        | Error::InvalidGrid(_)
        | Error::InadmissibleCoefficients { .. }
        | Error::EmptyBand { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidLocalization { .. }
        | Error::InvalidSeries(_)
        | Error::Snapshot(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Grid", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyGrid(Grid3);

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (points_per_axis, box_length, dealias_fraction = Grid3::DEFAULT_DEALIAS))]
    fn new(points_per_axis: usize, box_length: f64, dealias_fraction: f64) -> PyResult<Self> {
        Grid3::with_dealias(points_per_axis, box_length, dealias_fraction).map(Self).map_err(to_py)
    }

    #[getter]
    fn points_per_axis(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn box_length(&self) -> f64 {
        self.0.box_length()
    }

    #[getter]
    fn dealias_fraction(&self) -> f64 {
        self.0.dealias_fraction()
    }

    fn __repr__(&self) -> String {
        format!("Grid(points_per_axis={}, box_length={})", self.0.n(), self.0.box_length())
    }
}

#[pyclass(name = "Coefficients", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyCoefficients(hyperlc::multipliers::Coefficients);

#[pymethods]
impl PyCoefficients {
    #[new]
    fn new(nu1: f64, nu4: f64, nu5: f64) -> PyResult<Self> {
        hyperlc::multipliers::Coefficients::new(nu1, nu4, nu5).map(Self).map_err(to_py)
    }

    #[getter]
    fn nu1(&self) -> f64 {
        self.0.nu1()
    }

    #[getter]
    fn nu4(&self) -> f64 {
        self.0.nu4()
    }

    #[getter]
    fn nu5(&self) -> f64 {
        self.0.nu5()
    }

    /// Constant `c` with `L_ii(ξ) ≥ c|ξ|²` for all `i`.
    fn parabolicity(&self) -> f64 {
        self.0.parabolicity()
    }

    /// Eigenvalues `(L_11, L_22, L_33)` of the viscous symbol at `xi`.
    fn symbol(&self, xi: [f64; 3]) -> [f64; 3] {
        operator_l(&self.0, xi)
    }

    fn __repr__(&self) -> String {
        format!("Coefficients(nu1={}, nu4={}, nu5={})", self.0.nu1(), self.0.nu4(), self.0.nu5())
    }
}

/// Simulation state `(v, Φ)` with the means of `φ` and `∂tφ`.
#[pyclass(name = "State", frozen, from_py_object)]
#[derive(Clone)]
struct PyState(SimulationState);

#[pymethods]
impl PyState {
    #[getter]
    fn t(&self) -> f64 {
        self.0.t
    }

    #[getter]
    fn step(&self) -> u64 {
        self.0.step
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid(*self.0.grid())
    }

    /// `E⁰` without the dissipation integral, at derivative order `order`.
    #[pyo3(signature = (order = 4))]
    fn energy(&self, order: u32) -> f64 {
        energy_e0(&self.0, order)
    }

    /// Physical samples of `u = 𝕌v`, one flat row-major list per component.
    fn velocity(&self) -> [Vec<f64>; 3] {
        self.0.velocity().to_real()
    }

    /// Physical samples of the director `d`, one flat list per component.
    fn director(&self) -> PyResult<[Vec<f64>; 3]> {
        Ok(angles_to_director(&self.0.angles()).map_err(to_py)?.d.to_real())
    }

    /// Writes a binary snapshot.
    #[pyo3(signature = (path, coefficients, seed = 0))]
    fn save(&self, path: PathBuf, coefficients: PyCoefficients, seed: u64) -> PyResult<()> {
        Snapshot::new(self.0.clone(), coefficients.0, seed).save(&path).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("State(t={}, step={}, n={})", self.0.t, self.0.step, self.0.grid().n())
    }
}

fn parse_profile(name: &str) -> PyResult<Profile> {
    match name {
        "gaussian-bump" => Ok(Profile::GaussianBump),
        "random-band" => Ok(Profile::RandomBand),
        _ => Err(PyValueError::new_err(format!("unknown profile {name:?}, expected gaussian-bump or random-band"))),
    }
}

fn parse_scheme(name: &str) -> PyResult<ts::Scheme> {
    match name {
        "ETD2" | "etd2" => Ok(ts::Scheme::Etd2),
        "ETD-midpoint" | "etd-midpoint" => Ok(ts::Scheme::EtdMidpoint),
        _ => Err(PyValueError::new_err(format!("unknown scheme {name:?}, expected ETD2 or ETD-midpoint"))),
    }
}

/// Band-limited initial data scaled to smallness `epsilon0`.
#[pyfunction]
#[pyo3(signature = (grid, epsilon0, band, profile = "random-band", seed = 0))]
fn initial_data(grid: PyGrid, epsilon0: f64, band: [f64; 2], profile: &str, seed: u64) -> PyResult<PyState> {
    let spec = InitialDataSpec::new(epsilon0, seed, band, parse_profile(profile)?);
    ts::generate_initial_data(&spec, grid.0).map(PyState).map_err(to_py)
}

/// Integrates to `t_end`; returns the final state and the sampled series
/// as a dict of lists.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (state, coefficients, dt, t_end, scheme = "ETD2", sample_every = 1, diag_order = 4))]
fn run<'py>(
    py: Python<'py>,
    state: PyState,
    coefficients: PyCoefficients,
    dt: f64,
    t_end: f64,
    scheme: &str,
    sample_every: u64,
    diag_order: u32,
) -> PyResult<(PyState, Bound<'py, PyDict>)> {
    let mut cfg = SchemeConfig::new(dt, t_end);
    cfg.scheme = parse_scheme(scheme)?;
    let opts = RunOptions { sample_every, diag_order, ..RunOptions::default() };
    let out = py
        .detach(|| ts::run(state.0, &cfg, &coefficients.0, &opts, &mut []).map_err(|f| f.error))
        .map_err(to_py)?;
    let r = &out.report;
    let series = PyDict::new(py);
    series.set_item("t", &r.times)?;
    series.set_item("E0", &r.e0)?;
    series.set_item("kinetic", &r.kinetic)?;
    series.set_item("dissipation_integral", &r.dissipation_integral)?;
    series.set_item("wave_energy", &r.wave_energy)?;
    series.set_item("phi_sup", &r.phi_sup)?;
    series.set_item("div_u", &r.div_u)?;
    series.set_item("unit_norm_d", &r.unit_norm_d)?;
    Ok((PyState(out.state), series))
}

/// Reads a snapshot; returns `(state, coefficients, seed)`.
#[pyfunction]
fn load_snapshot(path: PathBuf) -> PyResult<(PyState, PyCoefficients, u64)> {
    let s = Snapshot::load(&path).map_err(to_py)?;
    Ok((PyState(s.state), PyCoefficients(s.coefficients), s.seed))
}

/// `U(ξ)` as a row-major 3×3 list.
#[pyfunction]
fn diagonalizer(xi: [f64; 3]) -> [[f64; 3]; 3] {
    u_diagonalizer(xi)
}

/// Leray projector `ℙ(ξ)` as a row-major 3×3 list.
#[pyfunction]
fn leray_symbol(xi: [f64; 3]) -> [[f64; 3]; 3] {
    leray(xi)
}

/// Log-log fit `y ≈ C t^p` over `window`; returns `(slope, stderr, prefactor)`.
#[pyfunction]
fn decay_fit(times: Vec<f64>, values: Vec<f64>, window: [f64; 2]) -> PyResult<(f64, f64, f64)> {
    let f = fit_series("series", &times, &values, window).map_err(to_py)?;
    Ok((f.slope, f.stderr, f.prefactor))
}

/// Validates a TOML config and returns its canonical form.
#[pyfunction]
fn canonical_config(text: &str) -> PyResult<String> {
    Ok(harness::parse_config(text).map_err(to_py)?.to_canonical_toml())
}

/// Runs a batch scenario from a config file; returns `(passed, table)`.
#[pyfunction]
#[pyo3(signature = (scenario, config, out = None, seed = None))]
fn run_scenario(py: Python<'_>, scenario: &str, config: PathBuf, out: Option<PathBuf>, seed: Option<u64>) -> PyResult<(bool, String)> {
    let scenario = match scenario {
        "simulate" => Scenario::Simulate,
        "verify-operators" => Scenario::VerifyOperators,
        "verify-decay" => Scenario::VerifyDecay,
        "cross-check" => Scenario::CrossCheck,
        _ => return Err(PyValueError::new_err(format!("unknown scenario {scenario:?}"))),
    };
    let mut cfg = harness::load_config(&config).map_err(to_py)?;
    if let Some(dir) = out {
        cfg.output.dir = dir;
    }
    if let Some(s) = seed {
        cfg.initial.seed = s;
    }
    let o = py.detach(|| harness::execute(scenario, &cfg)).map_err(to_py)?;
    Ok((o.pass, o.table))
}

#[pymodule(name = "hyperlc")]
fn hyperlc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyCoefficients>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(initial_data, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(load_snapshot, m)?)?;
    m.add_function(wrap_pyfunction!(diagonalizer, m)?)?;
    m.add_function(wrap_pyfunction!(leray_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(decay_fit, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add("SNAPSHOT_MAGIC", pyo3::types::PyBytes::new(m.py(), harness::SNAPSHOT_MAGIC))?;
    m.add("SNAPSHOT_VERSION", harness::SNAPSHOT_VERSION)?;
    Ok(())
}
