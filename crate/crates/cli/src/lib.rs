//! Experiment driver behind the `exclusion-lab` binary.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use config::ExperimentConfig;
use error::{CliError, CliResult};
use output::Report;

pub const COMMANDS: [&str; 7] = [
    "eigencheck",
    "tvcurve",
    "cutoff-scan",
    "censorcheck",
    "fkgcheck",
    "heatcheck",
    "areatrace",
];

pub fn run(config: &ExperimentConfig) -> CliResult<Report> {
    config.validate()?;
    match config.command.as_str() {
        "eigencheck" => commands::eigen::run(config),
        "tvcurve" => commands::tv::run(config),
        "cutoff-scan" => commands::cutoff::run(config),
        "censorcheck" => commands::censor::run(config),
        "fkgcheck" => commands::fkg::run(config),
        "heatcheck" => commands::heat::run(config),
        "areatrace" => commands::area::run(config),
        other => Err(CliError::Usage(format!(
            "unknown command {other:?}; expected one of {COMMANDS:?}"
        ))),
    }
}

/// 0 when every check passed, 1 on a violated check, 2 on usage or budget
/// errors.
pub fn exit_code(result: &CliResult<Report>) -> i32 {
    match result {
        Ok(r) if r.passed() => 0,
        Ok(_) => 1,
        Err(e) => e.exit_code(),
    }
}
