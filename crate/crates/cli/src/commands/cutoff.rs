//! Mixing-time estimates over a list of system sizes at half filling.

use exclusion_core::chain::{configuration_count, sep_space};
use exclusion_core::exact::{
    build_sep_generator, default_mixing_bracket, mixing_time_by, stationary_sep_measure,
};
use exclusion_core::sim::coalescence_estimate;
use exclusion_core::Params;
use serde_json::json;

use super::tv::lower_bound;
use super::{cutoff_scale, Distances, WallClock, DENSE_STATE_CAP};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f, Report, Writer};

pub const EPS_LEVELS: [f64; 3] = [0.75, 0.5, 0.25];

/// z for the order-statistic intervals and survival bands.
const Z: f64 = 1.96;

enum Mode {
    Exact,
    Coupling,
}

fn choose(c: &ExperimentConfig, p: Params) -> CliResult<Mode> {
    let states = configuration_count(p);
    match c.mode.as_str() {
        "exact" if states > c.max_states as u128 => Err(CliError::Budget(format!(
            "exact mode infeasible for N = {}: {states} states over max_states = {}",
            p.n(),
            c.max_states
        ))),
        "exact" => Ok(Mode::Exact),
        "coupling" => Ok(Mode::Coupling),
        _ if states <= DENSE_STATE_CAP as u128 => Ok(Mode::Exact),
        _ => Ok(Mode::Coupling),
    }
}

pub fn run(c: &ExperimentConfig) -> CliResult<Report> {
    let mut report = Report::default();
    if c.n_list.is_empty() {
        report.note("empty N list: nothing to do");
        return Ok(report);
    }
    let clock = WallClock::new(c);
    let mut w = Writer::new(&c.out)?;
    let mut rows = Vec::new();
    let mut spreads = Vec::new();
    let mut per_n = Vec::new();
    for &n in &c.n_list {
        clock.check(&format!("N = {n}"))?;
        let p = Params::new(c.k, n, c.k * n / 2)?;
        let mode = choose(c, p)?;
        // (estimate, lo, hi) per level, ordered as EPS_LEVELS
        let mut est = Vec::new();
        let mode_name = match mode {
            Mode::Exact => {
                let space = sep_space(p, c.max_states)?;
                let q = build_sep_generator(&space);
                let mu = stationary_sep_measure(&space);
                let d = Distances::new(&q, &mu, true)?;
                for eps in EPS_LEVELS {
                    let t = mixing_time_by(
                        |t| d.worst(t),
                        eps,
                        default_mixing_bracket(p.k(), n, p.m()),
                    )?;
                    est.push((t, t, t));
                }
                "exact"
            }
            Mode::Coupling => {
                let sim = coalescence_estimate(p, c.n_runs, c.seed, c.max_events);
                for eps in EPS_LEVELS {
                    let qe = sim.threshold_time(eps, Z)?;
                    if !qe.value.is_finite() {
                        return Err(CliError::Budget(format!(
                            "N = {n}: {} of {} replicas hit max_events = {} before the eps = {eps} quantile",
                            sim.censored(),
                            sim.n_runs(),
                            c.max_events
                        )));
                    }
                    est.push((qe.value, qe.lo, qe.hi));
                }
                if sim.censored() > 0 {
                    report.note(format!(
                        "N = {n}: {} censored replicas counted as apart",
                        sim.censored()
                    ));
                }
                let t_end = 2.0 * est[2].0;
                let times: Vec<f64> = (0..=100).map(|i| t_end * i as f64 / 100.0).collect();
                let surv: Vec<Vec<String>> = sim
                    .survival(&times, Z)
                    .iter()
                    .map(|s| vec![fmt_f(s.t), fmt_f(s.p_hat), fmt_f(s.ci_lo), fmt_f(s.ci_hi)])
                    .collect();
                w.csv(
                    &format!("survival_N{n}.csv"),
                    &["t", "p_hat", "ci_lo", "ci_hi"],
                    &surv,
                )?;
                per_n.push(
                    json!({ "N": n, "events": sim.total_events(), "censored": sim.censored() }),
                );
                "coupling"
            }
        };
        let scale = cutoff_scale(p);
        let mut row = vec![
            n.to_string(),
            p.k().to_string(),
            p.m().to_string(),
            mode_name.to_string(),
        ];
        let mut bounds = Vec::new();
        for (&eps, &(t, _, _)) in EPS_LEVELS.iter().zip(&est) {
            let lb = lower_bound(p, eps)?;
            let ok = if c.reverse_inequality {
                lb > t
            } else {
                lb <= t
            };
            report.check(ok, || {
                format!("N = {n}, eps = {eps}: lower bound {lb} vs estimate {t}")
            });
            bounds.push(lb);
        }
        let spread = (est[2].0 - est[0].0) / est[1].0;
        spreads.push(spread);
        row.extend(est.iter().map(|e| fmt_f(e.0)));
        row.extend(est.iter().flat_map(|e| [fmt_f(e.1), fmt_f(e.2)]));
        row.extend(bounds.iter().map(|&b| fmt_f(b)));
        row.extend(est.iter().map(|e| fmt_f(e.0 / scale)));
        row.push(fmt_f(spread));
        rows.push(row);
    }
    let shrinking = spreads.windows(2).all(|s| s[1] < s[0]);
    if c.assert_spread {
        report.check(shrinking, || format!("spread does not shrink: {spreads:?}"));
    } else if !shrinking {
        report.note(format!("spread not strictly decreasing: {spreads:?}"));
    }

    w.csv(
        "cutoff.csv",
        &[
            "N",
            "k",
            "m",
            "mode",
            "t_mix_0.75",
            "t_mix_0.5",
            "t_mix_0.25",
            "ci_lo_0.75",
            "ci_hi_0.75",
            "ci_lo_0.5",
            "ci_hi_0.5",
            "ci_lo_0.25",
            "ci_hi_0.25",
            "lower_bound_0.75",
            "lower_bound_0.5",
            "lower_bound_0.25",
            "ratio_0.75",
            "ratio_0.5",
            "ratio_0.25",
            "spread",
        ],
        &rows,
    )?;
    w.gnuplot(
        "cutoff.gp",
        "set logscale x 2\nset xlabel 'N'\nset multiplot layout 1,2\n\
         plot 'cutoff.csv' using 1:17 with linespoints, '' using 1:18 with linespoints, '' using 1:19 with linespoints\n\
         plot 'cutoff.csv' using 1:20 with linespoints\nunset multiplot",
    )?;
    w.manifest(
        c,
        &report,
        json!({ "eps_levels": EPS_LEVELS, "z": Z, "spreads": spreads, "coupling_runs": per_n }),
    )?;
    Ok(report)
}
