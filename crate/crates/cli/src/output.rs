//! All file writes of a run go through one [`Writer`], which also records
//! what it wrote for the manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::CliResult;

/// Outcome of a command's checks.
#[derive(Debug, Default, Clone, Serialize)]
pub struct Report {
    pub checks: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Report {
    /// Records one check; `what` is only evaluated on failure.
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub struct Writer {
    dir: PathBuf,
    outputs: Vec<String>,
    started: Instant,
}

/// Floats in CSV use the shortest round-trip form, so reruns are
/// byte-identical.
pub fn fmt_f(x: f64) -> String {
    format!("{x}")
}

impl Writer {
    pub fn new(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
        let mut w = csv::Writer::from_path(self.dir.join(name))?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    /// A gnuplot script plotting columns of a CSV written by this run.
    pub fn gnuplot(&mut self, name: &str, body: &str) -> CliResult<()> {
        let script = format!(
            "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\n\
             set output '{}.png'\n{body}\n",
            name.trim_end_matches(".gp")
        );
        fs::write(self.dir.join(name), script)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    /// Writes `manifest.json` describing the run; call last.
    pub fn manifest(
        self,
        config: &ExperimentConfig,
        report: &Report,
        extra: Value,
    ) -> CliResult<()> {
        let manifest = json!({
            "command": config.command,
            "version": env!("CARGO_PKG_VERSION"),
            "config": config.entries(),
            "config_text": config.to_text(),
            "seed": config.seed,
            "n_runs": config.n_runs,
            "wall_secs": self.started.elapsed().as_secs_f64(),
            "outputs": self.outputs,
            "passed": report.passed(),
            "checks": report.checks,
            "failures": report.failures,
            "notes": report.notes,
            "details": extra,
        });
        fs::write(
            self.dir.join("manifest.json"),
            serde_json::to_string_pretty(&manifest)? + "\n",
        )?;
        Ok(())
    }
}
