//! Mean height from the top k-permutation against the discrete heat flow and
//! its envelopes.

use exclusion_core::chain::{height_of_kpermutation, kpermutation_count, shuffle_space};
use exclusion_core::exact::{build_shuffle_generator, dirac, transient_distribution};
use exclusion_core::sim::mc_shuffle_height_means;
use exclusion_core::spectral::{
    heat_solution, mean_height_global_envelope, mean_height_lower_envelope_from_top,
    mean_height_upper_envelope, top_height_profile,
};
use exclusion_core::{KPermutation, ShuffleParams};
use serde_json::json;

use super::{corrupt, WallClock};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f, Report, Writer};

const EXACT_TOL: f64 = 1e-9;
const ENVELOPE_TOL: f64 = 1e-12;

/// `(mean, stderr)` indexed `[time][x * (kN + 1) + y]`.
type Means = Vec<Vec<(f64, f64)>>;

fn exact_means(c: &ExperimentConfig, p: ShuffleParams) -> CliResult<Means> {
    let space = shuffle_space(p, c.max_states)?;
    let mut q = build_shuffle_generator(&space);
    if c.corrupt_generator {
        q = corrupt(&q)?;
    }
    let heights: Vec<_> = space.states().iter().map(height_of_kpermutation).collect();
    let nu0 = dirac(
        space.len(),
        space.index_of(&KPermutation::top(p)).expect("enumerated"),
    );
    let width = p.cards() + 1;
    let clock = WallClock::new(c);
    let mut out = Vec::new();
    for &t in &c.times {
        clock.check(&format!("t = {t}"))?;
        let nu = transient_distribution(&q, &nu0, t)?;
        let mut row = vec![(0.0, 0.0); (p.n() + 1) * width];
        for (w, h) in nu.iter().zip(&heights) {
            for x in 0..=p.n() {
                for y in 0..width {
                    row[x * width + y].0 += w * h.value(x, y);
                }
            }
        }
        out.push(row);
    }
    Ok(out)
}

fn mc_means(c: &ExperimentConfig, p: ShuffleParams) -> CliResult<Means> {
    let t_max = *c.times.last().expect("nonempty");
    let expected_rings = 2.0 * (p.k() * p.k() * (p.n() - 1)) as f64 * t_max;
    if expected_rings > c.max_events as f64 {
        return Err(CliError::Budget(format!(
            "about {expected_rings:.0} rings per replica over max_events = {}",
            c.max_events
        )));
    }
    let est = mc_shuffle_height_means(&KPermutation::top(p), &c.times, c.n_runs, c.seed)?;
    Ok(est
        .into_iter()
        .map(|row| row.into_iter().map(|e| (e.mean, e.stderr)).collect())
        .collect())
}

pub fn run(c: &ExperimentConfig) -> CliResult<Report> {
    let mut report = Report::default();
    if c.times.is_empty() {
        report.note("empty time grid: nothing to do");
        return Ok(report);
    }
    let p = ShuffleParams::new(c.k, c.n)?;
    let (k, n) = (p.k(), p.n());
    let ys: Vec<usize> = if c.y_list.is_empty() {
        (0..=p.cards()).collect()
    } else {
        c.y_list.clone()
    };
    if let Some(y) = ys.iter().find(|&&y| y > p.cards()) {
        return Err(CliError::Usage(format!(
            "y = {y} beyond kN = {}",
            p.cards()
        )));
    }
    let exact = match c.mode.as_str() {
        "exact" => true,
        "coupling" => false,
        _ => kpermutation_count(p) <= c.max_states as u128,
    };
    let means = if exact {
        exact_means(c, p)?
    } else {
        mc_means(c, p)?
    };

    let width = p.cards() + 1;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    let mut degenerate = 0usize;
    for (ti, &t) in c.times.iter().enumerate() {
        for &y in &ys {
            let heat = heat_solution(&top_height_profile(k, n, y), k, t)?;
            let upper = mean_height_upper_envelope(k, n, y, t);
            let global = mean_height_global_envelope(k, n, t);
            for x in 0..=n {
                let (mean, se) = means[ti][x * width + y];
                let h = heat.at(x);
                let lower = mean_height_lower_envelope_from_top(k, n, x, y, t);
                let diff = (mean - h).abs();
                let z = if se > 0.0 { diff / se } else { 0.0 };
                let boundary = x == 0 || x == n || y == 0 || y == p.cards();
                if exact || boundary {
                    worst = worst.max(diff);
                    report.check(diff <= EXACT_TOL, || {
                        format!("({x},{y},{t}): mean {mean} vs heat {h}")
                    });
                } else if se == 0.0 {
                    // every replica agreed; no scale to compare on
                    degenerate += 1;
                } else {
                    worst = worst.max(z);
                    report.check(z <= c.z_tol, || format!("({x},{y},{t}): z = {z:.2}"));
                }
                // envelopes apply to the exact mean, which the heat flow is
                let upper_ok = if c.reverse_inequality {
                    h > upper + ENVELOPE_TOL
                } else {
                    h <= upper + ENVELOPE_TOL
                };
                report.check(upper_ok, || {
                    format!("({x},{y},{t}): {h} against upper envelope {upper}")
                });
                report.check(h.abs() <= global + ENVELOPE_TOL, || {
                    format!("({x},{y},{t}): |{h}| > {global}")
                });
                report.check(h >= lower - ENVELOPE_TOL, || {
                    format!("({x},{y},{t}): {h} < lower envelope {lower}")
                });
                rows.push(vec![
                    fmt_f(t),
                    x.to_string(),
                    y.to_string(),
                    fmt_f(mean),
                    fmt_f(se),
                    fmt_f(h),
                    fmt_f(z),
                    fmt_f(upper),
                    fmt_f(lower),
                    fmt_f(global),
                ]);
            }
        }
    }
    report.note(format!(
        "{} route; worst {} {worst:.3e}",
        if exact { "exact" } else { "Monte Carlo" },
        if exact { "absolute error" } else { "|z|" }
    ));
    if degenerate > 0 {
        report.note(format!(
            "{degenerate} interior points with zero sample variance not compared"
        ));
    }

    let mut w = Writer::new(&c.out)?;
    w.csv(
        "heatcheck.csv",
        &[
            "t",
            "x",
            "y",
            "mean",
            "stderr",
            "heat",
            "z",
            "upper_envelope",
            "lower_envelope",
            "global_envelope",
        ],
        &rows,
    )?;
    w.gnuplot(
        "heatcheck.gp",
        "set xlabel 'x'\nset ylabel 'mean height'\n\
         plot 'heatcheck.csv' using 2:4:5 with yerrorbars title 'mean', '' using 2:6 with points title 'heat'",
    )?;
    w.manifest(
        c,
        &report,
        json!({
            "params": [k, n],
            "start": KPermutation::top(p).to_string(),
            "route": if exact { "exact" } else { "monte_carlo" },
            "y_values": ys,
            "exact_tolerance": EXACT_TOL,
            "z_tolerance": c.z_tol,
        }),
    )?;
    Ok(report)
}
