use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use exclusion_lab::config::ExperimentConfig;
use exclusion_lab::error::{CliError, CliResult};
use exclusion_lab::{exit_code, run, COMMANDS};

/// Exact and simulated checks for the capacity-k exclusion process and the
/// packet shuffle.
#[derive(Debug, Parser)]
#[command(name = "exclusion-lab", version)]
struct Args {
    /// One of eigencheck, tvcurve, cutoff-scan, censorcheck, fkgcheck,
    /// heatcheck, areatrace.
    command: String,
    /// Flat `key = value` file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    runs: Option<usize>,
    /// Any config key, as `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build(args: &Args) -> CliResult<ExperimentConfig> {
    if !COMMANDS.contains(&args.command.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown command {:?}; expected one of {COMMANDS:?}",
            args.command
        )));
    }
    let mut c = ExperimentConfig::default();
    if let Some(path) = &args.config {
        c.apply_text(&std::fs::read_to_string(path)?)?;
    }
    c.command = args.command.clone();
    if let Some(v) = args.k {
        c.k = v;
    }
    if let Some(v) = args.n {
        c.n = v;
    }
    if args.m.is_some() {
        c.m = args.m;
    }
    if let Some(v) = args.eps {
        c.eps = v;
    }
    if let Some(v) = args.seed {
        c.seed = v;
    }
    if let Some(v) = &args.out {
        c.out = v.clone();
    }
    if let Some(v) = args.runs {
        c.n_runs = v;
    }
    for kv in &args.set {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got {kv:?}")))?;
        c.set(key, value)?;
    }
    c.validate()?;
    Ok(c)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = build(&args).and_then(|c| run(&c));
    match &result {
        Ok(report) => {
            for note in &report.notes {
                println!("note: {note}");
            }
            for failure in &report.failures {
                println!("FAIL: {failure}");
            }
            println!(
                "{}: {} checks, {} failed",
                args.command,
                report.checks,
                report.failures.len()
            );
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
