//! Residuals of the closed-form eigenpairs against the exact generator.

use exclusion_core::chain::sep_space;
use exclusion_core::exact::{build_sep_generator, stationary_sep_measure};
use exclusion_core::spectral::{verify_eigenpair, EigenPair};
use serde_json::json;

use super::{corrupt, sep_params};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::{fmt_f, Report, Writer};

pub const RESIDUAL_TOL: f64 = 1e-9;

pub fn run(c: &ExperimentConfig) -> CliResult<Report> {
    let p = sep_params(c)?;
    let space = sep_space(p, c.max_states)?;
    let mut q = build_sep_generator(&space);
    if c.corrupt_generator {
        q = corrupt(&q)?;
    }
    let mut report = Report::default();
    let mut rows = Vec::new();
    for j in 0..p.n() {
        let pair = EigenPair::new(p, j)?;
        let r = verify_eigenpair(&q, &space, &pair)?;
        report.check(r.max() <= RESIDUAL_TOL, || {
            format!("j = {j}: residuals {:.3e} / {:.3e}", r.particle, r.height)
        });
        rows.push(vec![
            j.to_string(),
            fmt_f(pair.lambda),
            fmt_f(r.particle),
            fmt_f(r.height),
        ]);
    }
    let stationarity = q.stationarity_defect(&stationary_sep_measure(&space));
    report.note(format!(
        "{} states; stationarity defect {stationarity:.2e}",
        space.len()
    ));

    let mut w = Writer::new(&c.out)?;
    w.csv(
        "eigencheck.csv",
        &["j", "lambda", "residual_particle", "residual_height"],
        &rows,
    )?;
    w.gnuplot(
        "eigencheck.gp",
        "set logscale y\nplot 'eigencheck.csv' using 1:($3+1e-18) with linespoints, \
         '' using 1:($4+1e-18) with linespoints",
    )?;
    w.manifest(
        c,
        &report,
        json!({ "params": [p.k(), p.n(), p.m()], "states": space.len(), "tolerance": RESIDUAL_TOL }),
    )?;
    Ok(report)
}
