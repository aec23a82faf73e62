//! Verification measurements. The CLI scenarios and the acceptance suite
//! call the same functions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{CrossCheckConfig, DecayConfig};
use crate::diagnostics::{decay_fit, DecayFit};
use crate::error::{Error, Result};
use crate::multipliers::littlewood_paley::{max_localization_index, min_localization_index};
use crate::multipliers::symbols::{leray, mat_mul, mat_vec, norm_sq, transpose};
use crate::multipliers::{
    halfwave_apply, lp_project, lp_project_gt, lp_project_leq, operator_l, operator_lbar, q_project,
    resolved_shells, semigroup_apply, u_diagonalizer, Coefficients, Mat3,
};
use crate::physics::{angles_to_director, director_rk4_step, DirectorFlow};
use crate::spectral::{Grid3, SpectralField, VectorField3};
use crate::timestepper::{run, RunOptions, SchemeConfig, SimulationState};

/// One named verdict: `value` compared against `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, relation: "<=", pass: value <= tolerance }
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, relation: ">=", pass: value >= tolerance }
    }
}

/// Draws `(ν1, ν4, ν5)` from the interior of the admissible cone.
pub fn random_coefficients(rng: &mut impl Rng) -> Coefficients {
    let nu4 = rng.random_range(0.05..3.0);
    let nu5 = rng.random_range(-nu4 * 0.95..3.0);
    let floor = -2.0 * (nu4 + nu5);
    let nu1 = rng.random_range(floor * 0.95..3.0);
    Coefficients::new(nu1, nu4, nu5).expect("sampled inside the admissible cone")
}

/// Random direction with magnitude log-uniform on `[1e-2, 10^1.5]`.
pub fn random_wave_vector(rng: &mut impl Rng) -> [f64; 3] {
    let r = 10f64.powf(rng.random_range(-2.0..1.5));
    let v = [0; 3].map(|_| rng.random_range(-1.0..1.0));
    let n = norm_sq(v).sqrt().max(1e-3);
    v.map(|x| r * x / n)
}

/// Triples hugging each face of the admissible cone.
pub fn cone_edge_coefficients() -> Vec<Coefficients> {
    vec![
        Coefficients::new(-2.0 * 1.5 + 1e-9, 1.0, 0.5).expect("admissible"),
        Coefficients::new(0.3, 1.0, -1.0 + 1e-9).expect("admissible"),
        Coefficients::new(50.0, 1e-3, 0.0).expect("admissible"),
    ]
}

fn mat_dist(a: &Mat3, b: &Mat3) -> f64 {
    (0..3).flat_map(|i| (0..3).map(move |j| (a[i][j] - b[i][j]).abs())).fold(0.0, f64::max)
}

const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Algebraic identities of `U`, `ℙ` and the diagonalization `U L̄ U = diag(L)`
/// on divergence-free vectors, as max deviations over the samples.
pub fn operator_identities(coeffs: &[Coefficients], xis: &[[f64; 3]], seed: u64, tol: f64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut involution, mut orth, mut idem, mut grad, mut diag) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for xi in xis {
        let u = u_diagonalizer(*xi);
        involution = involution.max(mat_dist(&mat_mul(&u, &u), &IDENTITY));
        orth = orth.max(mat_dist(&mat_mul(&transpose(&u), &u), &IDENTITY));
        let p = leray(*xi);
        idem = idem.max(mat_dist(&mat_mul(&p, &p), &p));
        let r = norm_sq(*xi).sqrt();
        grad = grad.max(mat_vec(&p, xi.map(|x| x / r)).iter().map(|x| x.abs()).fold(0.0, f64::max));
    }
    for c in coeffs {
        for xi in xis {
            let u = u_diagonalizer(*xi);
            let lbar = operator_lbar(c, *xi);
            let l = operator_l(c, *xi);
            let w = [0; 3].map(|_| rng.random_range(-1.0..1.0));
            let v = mat_vec(&u, mat_vec(&leray(*xi), w));
            let lhs = mat_vec(&u, mat_vec(&lbar, mat_vec(&u, v)));
            let scale = (l[0].abs() + l[1].abs() + l[2].abs()).max(1.0);
            for k in 0..3 {
                diag = diag.max((lhs[k] - l[k] * v[k]).abs() / scale);
            }
        }
    }
    vec![
        Check::at_most("U² = I", involution, tol),
        Check::at_most("UᵀU = I", orth, tol),
        Check::at_most("ℙ² = ℙ", idem, tol),
        Check::at_most("ℙ ξ/|ξ| = 0", grad, tol),
        Check::at_most("U L̄ U = diag(L) on ker ξ·", diag, tol),
    ]
}

/// Smallest `(L_ii - c_i|ξ|²)/|ξ|²` over the samples, with `c_i` the
/// transverse and third-direction lower bounds. Passes above `-slack`.
pub fn symbol_positivity(coeffs: &[Coefficients], xis: &[[f64; 3]], slack: f64) -> Check {
    let mut worst = f64::INFINITY;
    for c in coeffs {
        let (c12, c3) = (c.lower_bound_transverse(), c.lower_bound_third());
        for &xi in xis {
            let r2 = norm_sq(xi);
            let l = operator_l(c, xi);
            worst = worst.min((l[0] - c12 * r2) / r2).min((l[1] - c12 * r2) / r2).min((l[2] - c3 * r2) / r2);
        }
    }
    Check::at_least("min (L_ii - c|ξ|²)/|ξ|²", worst, -slack)
}

/// Real field with independent uniform coefficients on `|ξ| ≤ kmax`.
pub fn random_real_field(grid: Grid3, rng: &mut impl Rng, kmax: f64) -> SpectralField {
    let coeffs: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            let (a, b) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if norm_sq(grid.wave_vector(idx)).sqrt() <= kmax {
                Complex64::new(a, b)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    SpectralField::from_coeffs(grid, coeffs).expect("sized by grid").real_part()
}

/// Partition of unity, the Bernstein constant `sup|P_k f| / (2^{3k/2}‖P_k f‖)`
/// over `fields` random shells, and reconstruction of `P_k` from `Q_jk`.
pub fn littlewood_paley_checks(grid: Grid3, seed: u64, fields: usize) -> Vec<Check> {
    let shells = resolved_shells(&grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut recon = 0.0f64;
    for _ in 0..5 {
        let f = random_real_field(grid, &mut rng, f64::INFINITY);
        let mut sum = lp_project_leq(&f, shells.kmin - 1);
        for k in shells.iter() {
            sum += &lp_project(&f, k);
        }
        recon = recon.max((&sum - &f).max_abs_coeff() / f.max_abs_coeff());
    }

    let mut bernstein = 0.0f64;
    for i in 0..fields {
        let k = shells.kmin + 1 + (i as i32 % (shells.kmax - shells.kmin - 1).max(1));
        let f = lp_project(&random_real_field(grid, &mut rng, f64::INFINITY), k);
        bernstein = bernstein.max(f.sup_norm() / ((1.5 * k as f64).exp2() * f.l2_norm()));
    }

    let jmax = max_localization_index(&grid);
    let mut q_err = 0.0f64;
    let f = random_real_field(grid, &mut rng, f64::INFINITY);
    for k in shells.iter() {
        let pk = lp_project(&f, k);
        let mut sum = SpectralField::zeros(grid);
        for j in min_localization_index(k)..=jmax.max(min_localization_index(k)) {
            sum += &q_project(&f, j, k).expect("admissible pair");
        }
        let scale = pk.max_abs_coeff().max(f64::MIN_POSITIVE);
        q_err = q_err.max((&sum - &pk).max_abs_coeff() / scale);
    }
    vec![
        Check::at_most("partition of unity", recon, 1e-12),
        Check::at_most("Bernstein constant", bernstein, 4.0),
        Check::at_most("Σ_j Q_jk = P_k", q_err, 1e-10),
    ]
}

/// The `verify-operators` suite: identities and positivity for the
/// configured coefficients, cone-edge triples and `random_triples` random
/// ones, then the Littlewood–Paley checks on the configured grid.
pub fn operator_suite(grid: Grid3, c: &Coefficients, seed: u64, random_triples: usize, wave_vectors: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![*c];
    coeffs.extend(cone_edge_coefficients());
    coeffs.extend((0..random_triples).map(|_| random_coefficients(&mut rng)));
    let xis: Vec<[f64; 3]> = (0..wave_vectors).map(|_| random_wave_vector(&mut rng)).collect();
    let mut checks = operator_identities(&coeffs, &xis, seed.wrapping_add(1), 1e-12);
    checks.push(symbol_positivity(&coeffs, &xis, 1e-12));
    checks.extend(littlewood_paley_checks(grid, seed.wrapping_add(2), 100));
    checks
}

pub fn log_times(t0: f64, t1: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| t0 * (t1 / t0).powf(i as f64 / (count - 1) as f64)).collect()
}

/// `weight · exp(-σ²|ξ|²/2)` defined on the Fourier side, so exactly
/// band-limited and periodic.
pub fn spectral_gaussian(grid: Grid3, sigma: f64, weight: f64) -> SpectralField {
    let coeffs: Vec<Complex64> = (0..grid.len())
        .map(|idx| Complex64::new(weight * (-0.5 * sigma * sigma * norm_sq(grid.wave_vector(idx))).exp(), 0.0))
        .collect();
    SpectralField::from_coeffs(grid, coeffs).expect("sized by grid")
}

/// Sampled series and its log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayMeasurement {
    pub fit: DecayFit,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl DecayMeasurement {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            out.push_str(&format!("{t:?},{v:?}\n"));
        }
        out
    }
}

pub const HEAT_EXPONENT: f64 = -1.5;
pub const WAVE_EXPONENT: f64 = -1.0;

fn decay_grid(cfg: &DecayConfig) -> Result<Grid3> {
    Grid3::new(cfg.points_per_axis, cfg.box_length)
}

/// Heat data of the decay tests: a vector Gaussian with unequal weights.
pub fn heat_data(cfg: &DecayConfig) -> Result<VectorField3> {
    let grid = decay_grid(cfg)?;
    Ok(VectorField3::new([1.0, 0.5, -0.25].map(|w| spectral_gaussian(grid, cfg.heat_sigma, w))))
}

/// `sup|e^{-tL} f|` over `cfg.heat_window`, fitted against `t^{-3/2}`.
pub fn heat_decay(c: &Coefficients, cfg: &DecayConfig) -> Result<DecayMeasurement> {
    let f = heat_data(cfg)?;
    let times = log_times(cfg.heat_window[0], cfg.heat_window[1], cfg.samples);
    let values = times
        .iter()
        .map(|&t| semigroup_apply(c, t, &f, 0).map(|v| v.sup_norm()))
        .collect::<Result<Vec<f64>>>()?;
    let fit = decay_fit("sup |e^{-tL} f|", &times, &values, cfg.heat_window)?
        .with_reference(HEAT_EXPONENT, "heat semigroup L¹→L∞ rate");
    Ok(DecayMeasurement { fit, times, values })
}

/// Largest `(‖e^{-tL} P_{>k} f‖ - e^{-c 4^k t}‖f‖)/‖f‖` over a few shells
/// and times, `c` the parabolicity constant. Nonpositive when the bound holds.
pub fn heat_shell_bound(c: &Coefficients, f: &VectorField3) -> Result<f64> {
    let kc = c.parabolicity();
    let norm0 = f.l2_norm();
    let mut worst = f64::NEG_INFINITY;
    for k in [-2, -1, 0, 1] {
        let kmin = (k as f64).exp2();
        let high = f.map(|x| lp_project_gt(x, k));
        for &t in &[0.1, 0.5, 1.0, 2.0] {
            let lhs = semigroup_apply(c, t, &high, 0)?.l2_norm();
            worst = worst.max((lhs - (-kc * kmin * kmin * t).exp() * norm0) / norm0);
        }
    }
    Ok(worst)
}

/// Fit window of the half-wave test: from one wavelength of the shell's
/// lowest frequency to 80% of the wrap-around time `πL`.
pub fn wave_window(cfg: &DecayConfig) -> [f64; 2] {
    cfg.wave_window.unwrap_or_else(|| {
        let lowest = (f64::from(cfg.wave_shell) - 1.0).exp2();
        [2.0 * std::f64::consts::PI / lowest, 0.8 * std::f64::consts::PI * cfg.box_length]
    })
}

/// `sup|e^{it|∇|} P_k δ|` fitted against `t^{-1}`, where `P_k δ` weights
/// every mode by the shell symbol.
pub fn halfwave_decay(cfg: &DecayConfig) -> Result<DecayMeasurement> {
    let grid = decay_grid(cfg)?;
    let f = lp_project(&spectral_gaussian(grid, 0.0, 1.0), cfg.wave_shell);
    let window = wave_window(cfg);
    if !(window[0] > 0.0 && window[1] > window[0]) {
        return Err(Error::InvalidArgument(format!("empty wave fit window {window:?}")));
    }
    let times = log_times(window[0], window[1], cfg.samples);
    let values: Vec<f64> =
        times.iter().map(|&t| halfwave_apply(t, &f).to_physical().iter().map(|z| z.norm()).fold(0.0, f64::max)).collect();
    let fit = decay_fit(&format!("sup |e^{{it|∇|}} P_{} f|", cfg.wave_shell), &times, &values, window)?
        .with_reference(WAVE_EXPONENT, "frequency-localized dispersive rate");
    Ok(DecayMeasurement { fit, times, values })
}

/// `‖d_dir(T) - d_ang(T)‖` for one step size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy {
    pub dt: f64,
    pub absolute: f64,
    pub relative: f64,
}

/// Runs the angle system (reprojecting every step) and the director system
/// (RK4) from the same data to `t_end` and compares the directors.
pub fn formulation_discrepancy(s0: &SimulationState, c: &Coefficients, dt: f64, t_end: f64) -> Result<Discrepancy> {
    let mut cfg = SchemeConfig::new(dt, t_end);
    cfg.reprojection_period = 1;
    let opts = RunOptions { sample_every: u64::MAX, ..RunOptions::default() };
    let angle = run(s0.clone(), &cfg, c, &opts, &mut []).map_err(|f| f.error)?.state;
    let d_ang = angles_to_director(&angle.angles())?.d;

    let mut dir = DirectorFlow { t: s0.t, u: s0.velocity(), director: angles_to_director(&s0.angles())? };
    let steps = cfg.steps_from(s0.t);
    for _ in 0..steps {
        dir = director_rk4_step(c, &dir, dt)?;
    }
    let absolute = (&dir.director.d - &d_ang).l2_norm();
    Ok(Discrepancy { dt, absolute, relative: absolute / d_ang.l2_norm() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub rows: Vec<Discrepancy>,
    /// `log2(e_h / e_{h/2})` between consecutive rows, scaled by the actual
    /// step ratio.
    pub orders: Vec<f64>,
    pub worst_relative: f64,
    pub tolerance: f64,
    pub min_order: f64,
    pub pass: bool,
}

pub fn cross_check(s0: &SimulationState, c: &Coefficients, cfg: &CrossCheckConfig) -> Result<CrossCheckReport> {
    let rows =
        cfg.dts.iter().map(|&dt| formulation_discrepancy(s0, c, dt, cfg.t_end)).collect::<Result<Vec<Discrepancy>>>()?;
    let orders: Vec<f64> = rows
        .windows(2)
        .map(|w| (w[0].absolute / w[1].absolute).ln() / (w[0].dt / w[1].dt).ln())
        .collect();
    let worst_relative = rows.iter().map(|r| r.relative).fold(0.0, f64::max);
    let pass = worst_relative <= cfg.tolerance && orders.iter().all(|&p| p >= cfg.min_order);
    Ok(CrossCheckReport { rows, orders, worst_relative, tolerance: cfg.tolerance, min_order: cfg.min_order, pass })
}
