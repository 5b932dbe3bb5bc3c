//! Censored against uncensored TV distance from the top k-permutation.

use exclusion_core::chain::{shuffle_space, Cuts};
use exclusion_core::exact::{
    build_shuffle_generator, censored_transient_distribution, dirac, transient_distribution,
    tv_distance, uniform_measure, CensoringScheme, UpdateMask,
};
use exclusion_core::sim::phase_times;
use exclusion_core::{KPermutation, ShuffleParams};
use serde_json::json;

use super::{corrupt, WallClock};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f, Report, Writer};

const TOL: f64 = 1e-12;

fn parse_mask(p: ShuffleParams, text: &str) -> CliResult<UpdateMask> {
    match text.trim() {
        "all" => Ok(UpdateMask::all(p)),
        "none" => Ok(UpdateMask::none(p)),
        list => {
            let bonds = list
                .split(',')
                .map(|b| b.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Usage(format!("bad bond list {list:?}")))?;
            Ok(UpdateMask::censor_bonds(p, &bonds)?)
        }
    }
}

/// `three_phase` censors the interior cut bonds of `R` blocks on the first
/// and last phase; otherwise pieces `start:mask` separated by `;`.
pub fn parse_scheme(c: &ExperimentConfig, p: ShuffleParams) -> CliResult<CensoringScheme> {
    if c.scheme.trim() == "three_phase" {
        let cuts = Cuts::new(p, c.r_or_default())?;
        let censored = UpdateMask::censor_bonds(p, &cuts.interior_bonds(p.n()))?;
        let (t1, t2, t3) = phase_times(p, c.delta);
        return Ok(CensoringScheme::new(
            vec![
                (0.0, censored.clone()),
                (t1, UpdateMask::all(p)),
                (t2, censored),
            ],
            t3,
        )?);
    }
    let mut pieces = Vec::new();
    for piece in c.scheme.split(';').filter(|s| !s.trim().is_empty()) {
        let (start, mask) = piece
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("scheme piece {piece:?} is not start:mask")))?;
        let start: f64 = start
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad piece start {start:?}")))?;
        pieces.push((start, parse_mask(p, mask)?));
    }
    let horizon = if c.horizon > 0.0 {
        c.horizon
    } else {
        c.times.last().copied().unwrap_or(0.0)
    };
    Ok(CensoringScheme::new(pieces, horizon)?)
}

pub fn run(c: &ExperimentConfig) -> CliResult<Report> {
    let mut report = Report::default();
    if c.times.is_empty() {
        report.note("empty time grid: nothing to do");
        return Ok(report);
    }
    let clock = WallClock::new(c);
    let p = ShuffleParams::new(c.k, c.n)?;
    let scheme = parse_scheme(c, p)?;
    if let Some(t) = c.times.iter().find(|&&t| t > scheme.horizon()) {
        return Err(CliError::Usage(format!(
            "time {t} beyond scheme horizon {}",
            scheme.horizon()
        )));
    }
    let space = shuffle_space(p, c.max_states)?;
    let mut q = build_shuffle_generator(&space);
    if c.corrupt_generator {
        q = corrupt(&q)?;
    }
    let mu = uniform_measure(space.len());
    let nu0 = dirac(
        space.len(),
        space.index_of(&KPermutation::top(p)).expect("enumerated"),
    );

    let mut rows = Vec::new();
    for &t in &c.times {
        clock.check(&format!("t = {t}"))?;
        let free = tv_distance(&transient_distribution(&q, &nu0, t)?, &mu)?;
        let cens = tv_distance(
            &censored_transient_distribution(&space, &nu0, &scheme, t)?,
            &mu,
        )?;
        let ok = if c.reverse_inequality {
            cens <= free - TOL
        } else {
            free <= cens + TOL
        };
        report.check(ok, || {
            format!("t = {t}: uncensored {free} vs censored {cens}")
        });
        rows.push(vec![fmt_f(t), fmt_f(free), fmt_f(cens), fmt_f(cens - free)]);
    }

    let mut w = Writer::new(&c.out)?;
    w.csv(
        "censorcheck.csv",
        &["t", "d_uncensored", "d_censored", "margin"],
        &rows,
    )?;
    w.gnuplot(
        "censorcheck.gp",
        "set xlabel 't'\nset ylabel 'TV distance from the top'\n\
         plot 'censorcheck.csv' using 1:2 with lines, '' using 1:3 with lines",
    )?;
    w.manifest(
        c,
        &report,
        json!({
            "params": [p.k(), p.n()],
            "states": space.len(),
            "start": KPermutation::top(p).to_string(),
            "scheme": scheme.describe(),
            "horizon": scheme.horizon(),
            "tolerance": TOL,
        }),
    )?;
    Ok(report)
}
