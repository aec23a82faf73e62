//! `hyperlc <scenario> --config <path> [--out <dir>] [--seed <n>]`
//!
//! Exit status: 0 pass, 2 config error, 3 numerical divergence or chart
//! violation, 4 verification failure, 1 anything else (I/O). The worker
//! thread count comes from `HYPERLC_THREADS` (default: all cores).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperlc::harness::{execute, exit_code_for, load_config, Scenario, EXIT_CONFIG, EXIT_OTHER};

const THREADS_VAR: &str = "HYPERLC_THREADS";

#[derive(Parser)]
#[command(name = "hyperlc", version, about = "Hyperbolic Ericksen-Leslie simulator and verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the angle system and write series, snapshots and a summary.
    Simulate(Args),
    /// Check the multiplier identities, symbol bounds and Littlewood-Paley machinery.
    VerifyOperators(Args),
    /// Measure heat and half-wave decay exponents.
    VerifyDecay(Args),
    /// Compare director and angle formulations under dt refinement.
    CrossCheck(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `initial.seed`.
    #[arg(long)]
    seed: Option<u64>,
}

impl Command {
    fn split(self) -> (Scenario, Args) {
        match self {
            Command::Simulate(a) => (Scenario::Simulate, a),
            Command::VerifyOperators(a) => (Scenario::VerifyOperators, a),
            Command::VerifyDecay(a) => (Scenario::VerifyDecay, a),
            Command::CrossCheck(a) => (Scenario::CrossCheck, a),
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("{THREADS_VAR}={raw:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    let (scenario, args) = cli.command.split();
    let mut cfg = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(exit_code_for(&e) as u8);
        }
    };
    if let Some(s) = cfg.scenario.filter(|&s| s != scenario) {
        eprintln!("note: config declares scenario {}, running {}", s.name(), scenario.name());
    }
    if let Some(dir) = args.out {
        cfg.output.dir = dir;
    }
    if let Some(seed) = args.seed {
        cfg.initial.seed = seed;
    }
    match execute(scenario, &cfg) {
        Ok(outcome) => {
            print!("{}", outcome.table);
            println!("{} {}", scenario.name(), if outcome.pass { "passed" } else { "FAILED" });
            for a in &outcome.artifacts {
                println!("wrote {}", a.display());
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {} failed: {e}", scenario.name());
            let code = exit_code_for(&e);
            ExitCode::from(if code == 0 { EXIT_OTHER } else { code } as u8)
        }
    }
}
