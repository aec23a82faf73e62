use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BASE: &str = r#"
[grid]
points_per_axis = 8
box_length = 1.0

[coefficients]
nu1 = 0.5
nu4 = 1.0
nu5 = 0.3

[initial]
epsilon0 = 1e-3
seed = 1
band = [1.0, 2.0]
profile = "gaussian-bump"

[scheme]
dt = 0.01
t_end = 0.04
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn hyperlc(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hyperlc"));
    cmd.args(args).env_remove("HYPERLC_THREADS");
    if let Some(t) = threads {
        cmd.env("HYPERLC_THREADS", t);
    }
    cmd.output().unwrap()
}

fn run(scenario: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![scenario, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    hyperlc(&args, Some("1"))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn simulate_succeeds_and_honours_out_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.toml", BASE);
    let out = dir.path().join("result");
    let o = run("simulate", &config, &out, &["--seed", "77"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("simulate passed"));
    for f in ["series.csv", "summary.json", "final.bin", "config.toml"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let echo = fs::read_to_string(out.join("config.toml")).unwrap();
    assert!(echo.contains("seed = 77"), "{echo}");
}

#[test]
fn missing_or_malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run("simulate", &dir.path().join("absent.toml"), &out, &[]);
    assert_eq!(o.status.code(), Some(2));

    let bad = write_config(dir.path(), "bad.toml", &BASE.replace("t_end = 0.04", "t_end = 0.04\nsteps = 4"));
    let o = run("simulate", &bad, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 20") && err.contains("steps"), "{err}");

    let inadmissible = write_config(dir.path(), "nu.toml", &BASE.replace("nu4 = 1.0", "nu4 = 0.0"));
    let o = run("simulate", &inadmissible, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ν4>0"));
}

#[test]
fn unusable_thread_count_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.toml", BASE);
    let args = ["simulate", "--config", config.to_str().unwrap(), "--out", dir.path().to_str().unwrap()];
    for bad in ["zero", "0", "-3"] {
        let o = hyperlc(&args, Some(bad));
        assert_eq!(o.status.code(), Some(2), "HYPERLC_THREADS={bad}");
        assert!(stderr(&o).contains("HYPERLC_THREADS"));
    }
    assert_eq!(hyperlc(&args, Some("2")).status.code(), Some(0));
}

#[test]
fn chart_violation_exits_3_and_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    // A margin this close to π/2 trips on the first sample of O(1) data.
    let text = BASE.replace("epsilon0 = 1e-3", "epsilon0 = 1.0") + "\n[diagnostics]\nchart_margin = 1.569\n";
    let config = write_config(dir.path(), "run.toml", &text);
    let out = dir.path().join("o");
    let o = run("simulate", &config, &out, &[]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("chart"));
    let summary = fs::read_to_string(out.join("summary.json")).unwrap();
    assert!(summary.contains("\"failed\""), "{summary}");
    assert!(out.join("last_good.bin").is_file());
    assert!(!out.join("final.bin").exists());
}

#[test]
fn failed_verification_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{BASE}\n[cross_check]\ndts = [0.02, 0.01]\nt_end = 0.04\ntolerance = 1e-30\nmin_order = 2.0\n"
    );
    let config = write_config(dir.path(), "run.toml", &text);
    let out = dir.path().join("o");
    let o = run("cross-check", &config, &out, &[]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("cross-check FAILED"));
    let csv = fs::read_to_string(out.join("cross_check.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("dt,absolute,relative"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn verify_operators_passes_on_a_small_budget() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{BASE}\n[verify_operators]\nrandom_triples = 10\nwave_vectors = 200\n");
    let config = write_config(dir.path(), "run.toml", &text);
    let out = dir.path().join("o");
    let o = run("verify-operators", &config, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(out.join("operators.json").is_file());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hyperlc(&[], None).status.code(), Some(2));
    assert_eq!(hyperlc(&["simulate"], None).status.code(), Some(2));
    assert_eq!(hyperlc(&["integrate", "--config", "x.toml"], None).status.code(), Some(2));
}
