//! Exact `d(t)` curve with the rough upper bound and the spectral lower bound.

use exclusion_core::chain::{extremal_states, sep_space};
use exclusion_core::exact::{build_sep_generator, mixing_time_by, stationary_sep_measure};
use exclusion_core::spectral::{rough_upper_bound, theorem_lower_bound};
use exclusion_core::Params;
use serde_json::json;

use super::{corrupt, sep_params, Distances, WallClock};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::{fmt_f, Report, Writer};

const TOL: f64 = 1e-12;

/// Holes of the m-particle system form the (kN − m)-particle system, so the
/// lower bound for `m > kN/2` is taken from the mirror.
pub fn lower_bound(p: Params, eps: f64) -> CliResult<f64> {
    let m = p.m().min(p.capacity() - p.m());
    Ok(theorem_lower_bound(Params::new(p.k(), p.n(), m)?, eps)?)
}

pub fn run(c: &ExperimentConfig) -> CliResult<Report> {
    let mut report = Report::default();
    if c.times.is_empty() {
        report.note("empty time grid: nothing to do");
        return Ok(report);
    }
    let clock = WallClock::new(c);
    let p = sep_params(c)?;
    let space = sep_space(p, c.max_states)?;
    let mu = stationary_sep_measure(&space);
    let mut q = build_sep_generator(&space);
    if c.corrupt_generator {
        q = corrupt(&q)?;
    }
    let d = Distances::new(&q, &mu, !c.corrupt_generator)?;
    let (top, bottom) = extremal_states(p);
    let (top, bottom) = (
        space.index_of(&top).unwrap(),
        space.index_of(&bottom).unwrap(),
    );
    let lb = lower_bound(p, c.eps)?;
    let min_mu = mu.iter().copied().fold(f64::INFINITY, f64::min);

    let mut rows = Vec::new();
    let mut prev = f64::INFINITY;
    for &t in &c.times {
        clock.check(&format!("t = {t}"))?;
        let dt = d.worst(t)?;
        let (from_top, from_bottom) = (d.from(top, t)?, d.from(bottom, t)?);
        let rough = rough_upper_bound(p, t)?;
        let vacuous = t >= lb;
        if t == 0.0 {
            report.check((dt - (1.0 - min_mu)).abs() <= 1e-12, || {
                format!("d(0) = {dt} but 1 − min μ = {}", 1.0 - min_mu)
            });
        }
        report.check(dt <= prev + TOL, || {
            format!("d increases to {dt} at t = {t}")
        });
        report.check(from_top.max(from_bottom) <= dt + TOL, || {
            format!("extremal start above worst case at t = {t}")
        });
        let bound_ok = if c.reverse_inequality {
            dt >= rough - TOL
        } else {
            dt <= rough + TOL
        };
        report.check(bound_ok, || {
            format!("rough bound: d = {dt}, bound = {rough} at t = {t}")
        });
        if !vacuous {
            report.check(dt > c.eps - TOL, || {
                format!("d({t}) = {dt} <= eps before the lower bound {lb}")
            });
        }
        prev = dt;
        rows.push(vec![
            fmt_f(t),
            fmt_f(dt),
            fmt_f(from_top),
            fmt_f(from_bottom),
            fmt_f(rough),
            u8::from(vacuous).to_string(),
        ]);
    }

    let t_last = *c.times.last().unwrap();
    let mut t_mix = None;
    if c.corrupt_generator {
        report.note("corrupted generator: mixing time not computed");
    } else {
        let tm = mixing_time_by(|t| d.worst(t), c.eps, t_last.max(1.0))?;
        report.check(lb <= tm + 1e-9, || {
            format!("lower bound {lb} above t_mix {tm}")
        });
        if t_last > tm {
            let d_last = d.worst(t_last)?;
            report.check(d_last <= c.eps + TOL, || {
                format!("grid passes t_mix = {tm} but d({t_last}) = {d_last} > eps")
            });
        }
        t_mix = Some(tm);
    }

    let mut w = Writer::new(&c.out)?;
    w.csv(
        "tvcurve.csv",
        &[
            "t",
            "d_exact",
            "d_from_top",
            "d_from_bottom",
            "bound_rough",
            "bound_wilson_vacuous",
        ],
        &rows,
    )?;
    w.gnuplot(
        "tvcurve.gp",
        &format!(
            "set xlabel 't'\nset ylabel 'TV distance'\nset yrange [0:1.05]\nset arrow from {lb},0 to {lb},1 nohead dt 2\n\
             plot 'tvcurve.csv' using 1:2 with lines, '' using 1:3 with lines, '' using 1:4 with lines, \
             '' using 1:5 with lines dt 3"
        ),
    )?;
    w.manifest(
        c,
        &report,
        json!({
            "params": [p.k(), p.n(), p.m()],
            "states": space.len(),
            "route": if matches!(d, Distances::Dense(_)) { "dense eigendecomposition" } else { "uniformization" },
            "eps": c.eps,
            "lower_bound": lb,
            "t_mix": t_mix,
            "tolerance": TOL,
        }),
    )?;
    Ok(report)
}
