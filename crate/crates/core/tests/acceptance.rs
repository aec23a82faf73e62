//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any failed.
//!
//! `cargo test -p hyperlc-core --test acceptance -- c3 c5` runs a subset.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyperlc::diagnostics::build_profile;
use hyperlc::harness::checks::{
    cone_edge_coefficients, cross_check, halfwave_decay, heat_data, heat_decay, heat_shell_bound,
    littlewood_paley_checks, operator_identities, random_coefficients, random_wave_vector, symbol_positivity, wave_window,
    Check,
};
use hyperlc::harness::{CrossCheckConfig, DecayConfig};
use hyperlc::multipliers::{halfwave_apply, semigroup_apply, Coefficients};
use hyperlc::physics::NormalizedWave;
use hyperlc::spectral::Grid3;
use hyperlc::timestepper::{
    generate_initial_data, run, InitialDataSpec, Profile, RunOptions, SchemeConfig, SimulationState,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn describe(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| format!("{} {:.1e} ({} {:.0e})", c.name, c.value, c.relation, c.tolerance))
        .collect::<Vec<_>>()
        .join(", ")
}

fn c1_operator_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let coeffs: Vec<Coefficients> = (0..100).map(|_| random_coefficients(&mut rng)).collect();
    let xis: Vec<[f64; 3]> = (0..10_000).map(|_| random_wave_vector(&mut rng)).collect();
    let checks = operator_identities(&coeffs, &xis, 11, 1e-12);
    verdict(checks.iter().all(|c| c.pass), describe(&checks))
}

fn c2_symbol_positivity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut coeffs: Vec<Coefficients> = (0..100).map(|_| random_coefficients(&mut rng)).collect();
    coeffs.extend(cone_edge_coefficients());
    let xis: Vec<[f64; 3]> = (0..10_000).map(|_| random_wave_vector(&mut rng)).collect();
    let check = symbol_positivity(&coeffs, &xis, 1e-12);
    verdict(check.pass, format!("{} over {} triples", describe(std::slice::from_ref(&check)), coeffs.len()))
}

/// Box side `2π·16 = 32π`, unit-width Gaussian.
fn decay_config() -> DecayConfig {
    DecayConfig { points_per_axis: 128, box_length: 16.0, ..DecayConfig::default() }
}

fn c3_heat_decay() -> Verdict {
    let cfg = decay_config();
    let c = Coefficients::new(2.0, 10.0, 2.0).unwrap();
    let heat = match heat_decay(&c, &cfg) {
        Ok(h) => h,
        Err(e) => return verdict(false, format!("fit failed: {e}")),
    };
    let excess = heat_shell_bound(&c, &heat_data(&cfg).unwrap()).unwrap();
    verdict(
        heat.fit.passes(0.15) && excess <= 1e-10,
        format!(
            "slope {:.3} ± {:.1e} vs -1.5 (tol 0.15); shell bound max excess {:.2e} (tol 1e-10)",
            heat.fit.slope, heat.fit.stderr, excess
        ),
    )
}

fn c4_dispersive_decay() -> Verdict {
    let cfg = decay_config();
    let window = wave_window(&cfg);
    match halfwave_decay(&cfg) {
        Ok(m) => verdict(
            m.fit.passes(0.15),
            format!(
                "slope {:.3} ± {:.1e} over t ∈ [{:.0}, {:.1}] (wrap at {:.1}) vs -1.0 (tol 0.15)",
                m.fit.slope,
                m.fit.stderr,
                window[0],
                window[1],
                std::f64::consts::PI * cfg.box_length
            ),
        ),
        Err(e) => verdict(false, format!("fit failed: {e}")),
    }
}

/// Moderate viscosities keep the explicit director RK4 stable at these steps.
fn cross_check_coefficients() -> Coefficients {
    Coefficients::new(0.2, 0.2, 0.1).unwrap()
}

fn c5_formulation_equivalence() -> Verdict {
    let grid = Grid3::new(32, 1.0).unwrap();
    let s0 = generate_initial_data(&InitialDataSpec::new(1e-2, 5, [1.0, 2.0], Profile::RandomBand), grid).unwrap();
    let cfg = CrossCheckConfig { dts: vec![0.04, 0.02, 0.01], t_end: 1.0, tolerance: 1e-5, min_order: 2.0 };
    match cross_check(&s0, &cross_check_coefficients(), &cfg) {
        Ok(r) => verdict(
            r.pass,
            format!(
                "rel ‖d_dir - d_ang‖ = {} at dt = {:?}; observed orders {:?} (need ≤ 1e-5 and ≥ 2)",
                r.rows.iter().map(|r| format!("{:.2e}", r.relative)).collect::<Vec<_>>().join(", "),
                cfg.dts,
                r.orders.iter().map(|p| format!("{p:.2}")).collect::<Vec<_>>()
            ),
        ),
        Err(e) => verdict(false, format!("cross-check failed: {e}")),
    }
}

fn stability_coefficients() -> Coefficients {
    Coefficients::new(0.5, 1.0, 0.3).unwrap()
}

fn c6_small_data_stability() -> Verdict {
    let grid = Grid3::new(32, 20.0).unwrap();
    let c = stability_coefficients();
    let s0 = generate_initial_data(&InitialDataSpec::new(1e-3, 11, [0.1, 0.4], Profile::GaussianBump), grid).unwrap();
    let cfg = SchemeConfig::new(0.1, 50.0);
    let opts = RunOptions { sample_every: 10, ..RunOptions::default() };
    let out = match run(s0, &cfg, &c, &opts, &mut []) {
        Ok(o) => o,
        Err(e) => return verdict(false, format!("run failed: {e}")),
    };
    let r = &out.report;
    let e00 = r.e0[0];
    let e_ratio = r.e0.iter().fold(0.0f64, |m, &e| m.max(e / e00));

    // Dissipation increments per unit time after t = 10.
    let at = |t: f64| r.times.iter().position(|&s| (s - t).abs() < 1e-9).expect("sampled time");
    let incs: Vec<f64> = (10..50).map(|t| r.dissipation_integral[at(t as f64 + 1.0)] - r.dissipation_integral[at(t as f64)]).collect();
    let incs_monotone = incs.windows(2).all(|w| w[1] <= w[0]);

    let div = r.div_u.iter().fold(0.0f64, |m, &x| m.max(x));
    let unit = r.unit_norm_d.iter().fold(0.0f64, |m, &x| m.max(x));
    let envelope: Vec<f64> = [10.0, 20.0, 30.0, 40.0]
        .iter()
        .map(|&a| {
            r.times.iter().zip(&r.phi_sup).filter(|(t, _)| **t >= a && **t <= a + 10.0).map(|(_, s)| *s).fold(0.0, f64::max)
        })
        .collect();
    let env_ok = envelope.windows(2).all(|w| w[1] <= w[0]);
    let pass = e_ratio <= 1.2 && incs_monotone && div <= 1e-10 && unit <= 5e-15 && env_ok;
    verdict(
        pass,
        format!(
            "max E0/E0(0) = {e_ratio:.4} (≤ 1.2); dissipation increments monotone after t=10: {incs_monotone}; \
             div {div:.1e} (≤ 1e-10); ||d|-1| {unit:.1e} (≤ 5e-15); Φ sup envelope {} nonincreasing: {env_ok}",
            envelope.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" > ")
        ),
    )
}

fn run_to(s0: &SimulationState, c: &Coefficients, cfg: SchemeConfig) -> SimulationState {
    let opts = RunOptions { sample_every: u64::MAX, ..RunOptions::default() };
    run(s0.clone(), &cfg, c, &opts, &mut []).expect("run").state
}

fn c7_temporal_convergence() -> Verdict {
    let grid = Grid3::new(32, 1.0).unwrap();
    let c = cross_check_coefficients();
    let s0 = generate_initial_data(&InitialDataSpec::new(5e-2, 3, [1.0, 2.0], Profile::RandomBand), grid).unwrap();
    let hs = [0.04, 0.02, 0.01];
    let mut lines = Vec::new();
    let mut pass = true;
    for scheme in [hyperlc::timestepper::Scheme::Etd2, hyperlc::timestepper::Scheme::EtdMidpoint] {
        let states: Vec<SimulationState> = hs
            .iter()
            .map(|&h| {
                let mut cfg = SchemeConfig::new(h, 1.0);
                cfg.scheme = scheme;
                run_to(&s0, &c, cfg)
            })
            .collect();
        let dv = |a: &SimulationState, b: &SimulationState| (&a.flow.v - &b.flow.v).l2_norm();
        let dw = |a: &SimulationState, b: &SimulationState| {
            ((&a.wave.phi[0] - &b.wave.phi[0]).l2_norm().powi(2) + (&a.wave.phi[1] - &b.wave.phi[1]).l2_norm().powi(2)).sqrt()
        };
        let pv = (dv(&states[0], &states[1]) / dv(&states[1], &states[2])).log2();
        let pw = (dw(&states[0], &states[1]) / dw(&states[1], &states[2])).log2();
        pass &= (1.8..=2.2).contains(&pv) && (1.8..=2.2).contains(&pw);
        lines.push(format!("{scheme:?}: v order {pv:.3}, Φ order {pw:.3}"));
    }

    // Linear exactness.
    let mut lin = SchemeConfig::new(0.01, 1.0);
    lin.nonlinear = false;
    let end = run_to(&s0, &c, lin);
    let want_v = semigroup_apply(&c, 1.0, &s0.flow.v, 0).unwrap();
    let ev = (&end.flow.v - &want_v).l2_norm() / s0.flow.v.l2_norm();
    let ew = (0..2)
        .map(|a| (&end.wave.phi[a] - &halfwave_apply(1.0, &s0.wave.phi[a])).l2_norm())
        .fold(0.0, f64::max)
        / s0.wave.l2_norm();
    pass &= ev <= 1e-13 && ew <= 1e-13;
    lines.push(format!("linear exactness v {ev:.1e}, Φ {ew:.1e} (≤ 1e-13)"));
    verdict(pass, format!("{} (orders in [1.8, 2.2])", lines.join("; ")))
}

fn c8_littlewood_paley() -> Verdict {
    let checks = littlewood_paley_checks(Grid3::new(32, 2.0).unwrap(), 8, 100);
    verdict(checks.iter().all(|c| c.pass), describe(&checks))
}

fn profile_drift(s0: &SimulationState, s1: &SimulationState) -> f64 {
    let p0 = build_profile(s0.t, &s0.wave);
    let p1 = build_profile(s1.t, &s1.wave);
    ((&p1[0] - &p0[0]).l2_norm().powi(2) + (&p1[1] - &p0[1]).l2_norm().powi(2)).sqrt()
}

fn c9_profile_stationarity() -> Verdict {
    let grid = Grid3::new(32, 4.0).unwrap();
    let c = stability_coefficients();
    let spec = InitialDataSpec::new(1e-3, 9, [0.25, 1.5], Profile::RandomBand);
    let s0 = generate_initial_data(&spec, grid).unwrap();

    let t_free = 1.0;
    let mut free = SchemeConfig::new(1e-3, t_free);
    free.nonlinear = false;
    let s1 = run_to(&s0, &c, free);
    let psi0 = NormalizedWave { phi: build_profile(0.0, &s0.wave) };
    let free_rate = profile_drift(&s0, &s1) / psi0.l2_norm() / t_free;

    let t_nl = 4.0;
    let drift = |eps: f64| {
        let s0 = generate_initial_data(&InitialDataSpec { epsilon0: eps, ..spec }, grid).unwrap();
        let s1 = run_to(&s0, &c, SchemeConfig::new(0.05, t_nl));
        profile_drift(&s0, &s1) / t_nl
    };
    let (d1, d2) = (drift(1e-3), drift(2e-3));
    let ratio = d2 / d1;
    verdict(
        free_rate <= 1e-6 && (3.5..=4.5).contains(&ratio),
        format!(
            "free drift {free_rate:.1e}/unit time (≤ 1e-6); nonlinear drift {d1:.3e} → {d2:.3e} per unit time, \
             ratio {ratio:.3} (in [3.5, 4.5])"
        ),
    )
}

type Criterion = (&'static str, &'static str, Duration, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("c1", "operator identities", Duration::from_secs(10), c1_operator_identities),
        ("c2", "symbol positivity", Duration::from_secs(5), c2_symbol_positivity),
        ("c3", "heat decay", Duration::from_secs(300), c3_heat_decay),
        ("c4", "dispersive decay", Duration::from_secs(300), c4_dispersive_decay),
        ("c5", "formulation equivalence", Duration::from_secs(120), c5_formulation_equivalence),
        ("c6", "small-data stability", Duration::from_secs(600), c6_small_data_stability),
        ("c7", "temporal convergence", Duration::from_secs(120), c7_temporal_convergence),
        ("c8", "Littlewood-Paley machinery", Duration::from_secs(60), c8_littlewood_paley),
        ("c9", "profile stationarity", Duration::from_secs(300), c9_profile_stationarity),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, budget, f) in criteria {
        if !filters.is_empty() && !filters.iter().any(|p| id.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let took = start.elapsed();
        let in_time = took <= budget;
        let pass = v.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {id} {name}: {} [{:.1} s, budget {} s{}]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
