//! Total-variation distances, worst-case distance curves and mixing times.

use rayon::prelude::*;

use crate::error::{out_of_range, Error, Result};
use crate::exact::generator::RateMatrix;
use crate::exact::transient::{dirac, transient_distribution};

/// Absolute time tolerance of [`mixing_time`].
pub const MIXING_TIME_TOL: f64 = 1e-6;

/// Half the L1 distance.
pub fn tv_distance(nu: &[f64], mu: &[f64]) -> Result<f64> {
    if nu.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            got: nu.len(),
        });
    }
    Ok(0.5 * nu.iter().zip(mu).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `‖P_t(start, ·) − μ‖_TV`.
pub fn distance_from(q: &RateMatrix, mu: &[f64], start: usize, t: f64) -> Result<f64> {
    if start >= q.dim() {
        return Err(out_of_range("start", format!("{start} >= {}", q.dim())));
    }
    let nu = transient_distribution(q, &dirac(q.dim(), start), t)?;
    tv_distance(&nu, mu)
}

/// `d(t) = max_x ‖P_t(x, ·) − μ‖_TV` over every Dirac start.
pub fn worst_case_distance(q: &RateMatrix, mu: &[f64], t: f64) -> Result<f64> {
    if mu.len() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            got: mu.len(),
        });
    }
    let per_start: Result<Vec<f64>> = (0..q.dim())
        .into_par_iter()
        .map(|x| distance_from(q, mu, x, t))
        .collect();
    Ok(per_start?.into_iter().fold(0.0, f64::max))
}

/// Generous upper end for the mixing-time bisection,
/// `10 N² ln(max(m, kN)) / (2kπ²)`.
pub fn default_mixing_bracket(k: usize, n: usize, m: usize) -> f64 {
    let scale = (m.max(k * n)).max(2) as f64;
    10.0 * (n * n) as f64 * scale.ln() / (2.0 * k as f64 * std::f64::consts::PI.powi(2))
}

/// `inf{t : d(t) ≤ eps}` by bisection on the nonincreasing map `t ↦ d(t)`,
/// to absolute tolerance [`MIXING_TIME_TOL`]. The upper end is doubled until
/// it brackets the crossing.
pub fn mixing_time(q: &RateMatrix, mu: &[f64], eps: f64, bracket_hi: f64) -> Result<f64> {
    mixing_time_by(|t| worst_case_distance(q, mu, t), eps, bracket_hi)
}

/// Bisection for a caller-supplied nonincreasing distance curve.
pub fn mixing_time_by(
    mut d: impl FnMut(f64) -> Result<f64>,
    eps: f64,
    bracket_hi: f64,
) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(out_of_range("eps", format!("{eps} not in (0, 1)")));
    }
    if d(0.0)? <= eps {
        return Ok(0.0);
    }
    let mut hi = if bracket_hi > 0.0 { bracket_hi } else { 1.0 };
    let mut doublings = 0;
    while d(hi)? > eps {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::Validation("distance never drops below eps".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > MIXING_TIME_TOL {
        let mid = 0.5 * (lo + hi);
        if d(mid)? > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
