//! Flat `key = value` experiment configuration with flag overrides.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: String,
    pub k: usize,
    pub n: usize,
    /// `None` means `⌊kN/2⌋`.
    pub m: Option<usize>,
    /// Block count for skeleton-based commands; `None` means `⌈1/δ⌉`.
    pub r: Option<usize>,
    pub delta: f64,
    pub eps: f64,
    /// Strictly increasing observation times.
    pub times: Vec<f64>,
    pub n_runs: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub max_states: usize,
    pub max_events: u64,
    /// Wall-clock cap in seconds; `0` disables it.
    pub max_wall_secs: f64,
    /// Strictly increasing system sizes for the cutoff scan.
    pub n_list: Vec<usize>,
    /// `auto`, `exact` or `coupling`.
    pub mode: String,
    /// `three_phase` or pieces `start:mask;start:mask` with mask `all`,
    /// `none` or a comma list of censored bonds.
    pub scheme: String,
    /// Horizon of a piecewise scheme; `0` means the last observation time.
    pub horizon: f64,
    /// Card cut levels for the heat check; empty means every `y`.
    pub y_list: Vec<usize>,
    pub pairs: usize,
    /// Largest allowed |z| for Monte Carlo comparisons.
    pub z_tol: f64,
    /// Fail the cutoff scan when the window spread does not shrink.
    pub assert_spread: bool,
    /// Negative-control hooks.
    pub corrupt_generator: bool,
    pub reverse_inequality: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: String::new(),
            k: 2,
            n: 3,
            m: None,
            r: None,
            delta: 0.5,
            eps: 0.25,
            times: Vec::new(),
            n_runs: 1000,
            seed: 1,
            out: PathBuf::from("out"),
            max_states: 200_000,
            max_events: 1_000_000,
            max_wall_secs: 0.0,
            n_list: Vec::new(),
            mode: "auto".into(),
            scheme: "three_phase".into(),
            horizon: 0.0,
            y_list: Vec::new(),
            pairs: 50,
            z_tol: 5.0,
            assert_spread: false,
            corrupt_generator: false,
            reverse_inequality: false,
        }
    }
}

fn bad(key: &str, value: &str) -> CliError {
    CliError::Usage(format!("cannot parse {key} = {value:?}"))
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value.trim().parse().map_err(|_| bad(key, value))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

/// `start:step:end`, end inclusive up to rounding.
fn parse_grid(value: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<f64> = value
        .split(':')
        .map(|s| parse("time_grid", s))
        .collect::<CliResult<_>>()?;
    let [start, step, end] = parts[..] else {
        return Err(bad("time_grid", value));
    };
    if !(step > 0.0) || end < start {
        return Err(bad("time_grid", value));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + step * i as f64).collect())
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl ExperimentConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let v = value.trim();
        match key.trim() {
            "command" => self.command = v.to_string(),
            "k" => self.k = parse(key, v)?,
            "N" | "n" => self.n = parse(key, v)?,
            "m" => {
                self.m = if v == "auto" {
                    None
                } else {
                    Some(parse(key, v)?)
                }
            }
            "R" | "r" => {
                self.r = if v == "auto" {
                    None
                } else {
                    Some(parse(key, v)?)
                }
            }
            "delta" => self.delta = parse(key, v)?,
            "eps" => self.eps = parse(key, v)?,
            "times" => self.times = parse_list(key, v)?,
            "time_grid" => self.times = parse_grid(v)?,
            "n_runs" | "runs" => self.n_runs = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "max_states" => self.max_states = parse(key, v)?,
            "max_events" => self.max_events = parse(key, v)?,
            "max_wall_secs" => self.max_wall_secs = parse(key, v)?,
            "n_list" => self.n_list = parse_list(key, v)?,
            "mode" => self.mode = v.to_string(),
            "scheme" => self.scheme = v.to_string(),
            "horizon" => self.horizon = parse(key, v)?,
            "y_list" => self.y_list = parse_list(key, v)?,
            "pairs" => self.pairs = parse(key, v)?,
            "z_tol" => self.z_tol = parse(key, v)?,
            "assert_spread" => self.assert_spread = parse(key, v)?,
            "corrupt_generator" => self.corrupt_generator = parse(key, v)?,
            "reverse_inequality" => self.reverse_inequality = parse(key, v)?,
            other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> CliResult<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "line {}: expected key = value",
                    lineno + 1
                )));
            };
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> CliResult<Self> {
        let mut c = ExperimentConfig::default();
        c.apply_text(text)?;
        c.validate()?;
        Ok(c)
    }

    /// Ordered key-value view; `from_text(to_text(c)) == c`.
    pub fn entries(&self) -> BTreeMap<&'static str, String> {
        let mut e = BTreeMap::new();
        e.insert("command", self.command.clone());
        e.insert("k", self.k.to_string());
        e.insert("N", self.n.to_string());
        e.insert("m", self.m.map_or("auto".into(), |m| m.to_string()));
        e.insert("R", self.r.map_or("auto".into(), |r| r.to_string()));
        e.insert("delta", self.delta.to_string());
        e.insert("eps", self.eps.to_string());
        e.insert("times", join(&self.times));
        e.insert("n_runs", self.n_runs.to_string());
        e.insert("seed", self.seed.to_string());
        e.insert("out", self.out.display().to_string());
        e.insert("max_states", self.max_states.to_string());
        e.insert("max_events", self.max_events.to_string());
        e.insert("max_wall_secs", self.max_wall_secs.to_string());
        e.insert("n_list", join(&self.n_list));
        e.insert("mode", self.mode.clone());
        e.insert("scheme", self.scheme.clone());
        e.insert("horizon", self.horizon.to_string());
        e.insert("y_list", join(&self.y_list));
        e.insert("pairs", self.pairs.to_string());
        e.insert("z_tol", self.z_tol.to_string());
        e.insert("assert_spread", self.assert_spread.to_string());
        e.insert("corrupt_generator", self.corrupt_generator.to_string());
        e.insert("reverse_inequality", self.reverse_inequality.to_string());
        e
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn validate(&self) -> CliResult<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.k == 0 || self.n < 2 {
            return usage(format!(
                "need k >= 1 and N >= 2, got k = {}, N = {}",
                self.k, self.n
            ));
        }
        if self.max_states == 0 || self.max_events == 0 || self.n_runs == 0 {
            return usage("caps and n_runs must be positive".into());
        }
        if !(self.max_wall_secs >= 0.0) || !(self.z_tol > 0.0) || !(self.delta > 0.0) {
            return usage("max_wall_secs, z_tol and delta out of range".into());
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return usage(format!("eps = {} not in (0, 1)", self.eps));
        }
        if self.times.iter().any(|t| !(*t >= 0.0) || !t.is_finite())
            || self.times.windows(2).any(|w| !(w[1] > w[0]))
        {
            return usage("times must be finite, nonnegative and strictly increasing".into());
        }
        if self.n_list.windows(2).any(|w| w[1] <= w[0]) || self.n_list.iter().any(|&n| n < 2) {
            return usage("n_list must be strictly increasing with N >= 2".into());
        }
        if !["auto", "exact", "coupling"].contains(&self.mode.as_str()) {
            return usage(format!("unknown mode {:?}", self.mode));
        }
        Ok(())
    }

    pub fn m_or_half(&self) -> usize {
        self.m.unwrap_or(self.k * self.n / 2)
    }

    pub fn r_or_default(&self) -> usize {
        self.r.unwrap_or((1.0 / self.delta).ceil() as usize).max(1)
    }
}
