//! Area between the extremal SEP copies: one trace plus replica averages.

use exclusion_core::sim::{area_process, area_summary, ExtremalPair};
use serde_json::json;

use super::sep_params;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f, Report, Writer};

pub fn run(c: &ExperimentConfig) -> CliResult<Report> {
    let mut report = Report::default();
    if c.times.is_empty() {
        report.note("empty time grid: nothing to do");
        return Ok(report);
    }
    if c.n_runs < 2 {
        return Err(CliError::Usage("areatrace needs n_runs >= 2".into()));
    }
    let p = sep_params(c)?;
    let t_max = *c.times.last().expect("nonempty");
    let expected_rings = ExtremalPair::new(p).rate() * t_max;
    if expected_rings > c.max_events as f64 {
        return Err(CliError::Budget(format!(
            "about {expected_rings:.0} rings per replica over max_events = {}",
            c.max_events
        )));
    }
    let k = p.k();

    let trace = area_process(p, &c.times, c.seed, 0)?;
    let trace_rows: Vec<Vec<String>> = trace
        .iter()
        .map(|r| {
            vec![
                fmt_f(r.t),
                r.area.to_string(),
                r.active.len().to_string(),
                r.d.to_string(),
                r.u.to_string(),
            ]
        })
        .collect();
    for r in &trace {
        report.check(r.drift_is_admissible(k), || {
            format!(
                "trace t = {}: d − u = {} not a multiple of k in [0, 2k²]",
                r.t,
                r.d - r.u
            )
        });
    }

    let s = area_summary(p, &c.times, c.n_runs, c.seed)?;
    report.check(s.drift_violations == 0, || {
        format!(
            "{} of {} records with inadmissible d − u",
            s.drift_violations, s.records
        )
    });
    for (i, (dm, se)) in s.step_mean.iter().zip(&s.step_stderr).enumerate() {
        let t = s.times[i + 1];
        let ok = if c.reverse_inequality {
            *dm > c.z_tol * se
        } else {
            *dm <= c.z_tol * se
        };
        report.check(ok, || {
            format!("mean area moves by {dm} (stderr {se}) into t = {t}")
        });
    }
    let mut summary_rows = Vec::new();
    for i in 0..s.times.len() {
        let (dm, dse) = if i == 0 {
            (0.0, 0.0)
        } else {
            (s.step_mean[i - 1], s.step_stderr[i - 1])
        };
        summary_rows.push(vec![
            fmt_f(s.times[i]),
            fmt_f(s.mean[i]),
            fmt_f(s.stderr[i]),
            fmt_f(dm),
            fmt_f(dse),
        ]);
    }

    let mut w = Writer::new(&c.out)?;
    w.csv(
        "area_trace.csv",
        &["t", "A", "active", "d", "u"],
        &trace_rows,
    )?;
    w.csv(
        "area_mean.csv",
        &["t", "mean_A", "stderr", "step", "step_stderr"],
        &summary_rows,
    )?;
    w.gnuplot(
        "areatrace.gp",
        "set xlabel 't'\nset ylabel 'area'\n\
         plot 'area_trace.csv' using 1:2 with steps, 'area_mean.csv' using 1:2:3 with yerrorlines",
    )?;
    w.manifest(
        c,
        &report,
        json!({
            "params": [p.k(), p.n(), p.m()],
            "records": s.records,
            "drift_violations": s.drift_violations,
            "step_z_tolerance": c.z_tol,
        }),
    )?;
    Ok(report)
}
