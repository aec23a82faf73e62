//! Configuration, scenarios, verification checks and snapshot files.

pub mod checks;
mod config;
mod scenarios;
mod snapshot;

pub use config::{
    parse_config, CrossCheckConfig, DecayConfig, DiagnosticsConfig, OperatorsConfig, OutputConfig, RunConfig,
    Scenario, SchemeSection,
};
pub use scenarios::{
    execute, exit_code_for, ScenarioOutcome, EXIT_CONFIG, EXIT_DIVERGENCE, EXIT_OTHER, EXIT_VERIFICATION,
    SHELL_BOUND_TOL,
};
pub use snapshot::{Snapshot, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};

/// Reads and parses a configuration file.
pub fn load_config(path: &std::path::Path) -> crate::Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::Config {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config(&text)
}
