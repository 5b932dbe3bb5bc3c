//! Transient laws `ν e^{tQ}` by uniformization.

use crate::error::{out_of_range, Error, Result};
use crate::exact::generator::RateMatrix;

/// Truncation tolerance on the neglected Poisson tail mass.
pub const UNIFORMIZATION_TOL: f64 = 1e-13;

/// Evolves `nu0` for time `t` under `q`.
///
/// With `Λ` the largest exit rate, `e^{tQ} = Σ_n Pois(Λt; n) P^n` where
/// `P = I + Q/Λ` is stochastic. Weights are built in log space so large `Λt`
/// does not underflow, and the series stops once the accumulated weight is
/// within [`UNIFORMIZATION_TOL`] of one.
pub fn transient_distribution(q: &RateMatrix, nu0: &[f64], t: f64) -> Result<Vec<f64>> {
    if nu0.len() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            got: nu0.len(),
        });
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(out_of_range(
            "t",
            format!("time must be finite and nonnegative, got {t}"),
        ));
    }
    let lambda = q.max_exit_rate();
    if t == 0.0 || lambda == 0.0 {
        return Ok(nu0.to_vec());
    }
    let a = lambda * t;
    let max_terms = (a + 40.0 * a.sqrt() + 60.0).ceil() as usize;

    let mut current = nu0.to_vec();
    let mut out = vec![0.0; nu0.len()];
    let mut log_w = -a;
    let mut accumulated = 0.0;
    for n in 0..=max_terms {
        if n > 0 {
            log_w += a.ln() - (n as f64).ln();
            // current <- current * P = current + current Q / Λ
            let flow = q.apply_left(&current);
            for (c, f) in current.iter_mut().zip(&flow) {
                *c += f / lambda;
            }
        }
        let w = log_w.exp();
        if w > 0.0 {
            for (o, c) in out.iter_mut().zip(&current) {
                *o += w * c;
            }
            accumulated += w;
        }
        if n as f64 > a && 1.0 - accumulated < UNIFORMIZATION_TOL {
            break;
        }
    }
    Ok(out)
}

/// Expectations `E_x[f(X_t)]` for every start `x`, i.e. `e^{tQ} f`.
pub fn transient_expectation(q: &RateMatrix, f: &[f64], t: f64) -> Result<Vec<f64>> {
    if f.len() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            got: f.len(),
        });
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(out_of_range(
            "t",
            format!("time must be finite and nonnegative, got {t}"),
        ));
    }
    let lambda = q.max_exit_rate();
    if t == 0.0 || lambda == 0.0 {
        return Ok(f.to_vec());
    }
    let a = lambda * t;
    let max_terms = (a + 40.0 * a.sqrt() + 60.0).ceil() as usize;
    let mut current = f.to_vec();
    let mut out = vec![0.0; f.len()];
    let mut log_w = -a;
    let mut accumulated = 0.0;
    for n in 0..=max_terms {
        if n > 0 {
            log_w += a.ln() - (n as f64).ln();
            let flow = q.apply_right(&current);
            for (c, g) in current.iter_mut().zip(&flow) {
                *c += g / lambda;
            }
        }
        let w = log_w.exp();
        if w > 0.0 {
            for (o, c) in out.iter_mut().zip(&current) {
                *o += w * c;
            }
            accumulated += w;
        }
        if n as f64 > a && 1.0 - accumulated < UNIFORMIZATION_TOL {
            break;
        }
    }
    Ok(out)
}

/// Checks nonnegativity and unit mass within `tol`.
pub fn validate_distribution(nu: &[f64], tol: f64) -> Result<()> {
    if let Some(v) = nu.iter().find(|v| !(**v >= -tol)) {
        return Err(Error::Validation(format!("negative probability {v}")));
    }
    let total: f64 = nu.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::Validation(format!(
            "total mass {total} differs from 1"
        )));
    }
    Ok(())
}

pub fn dirac(dim: usize, at: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[at] = 1.0;
    v
}
