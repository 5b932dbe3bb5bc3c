//! The three-phase censored schedule: censor the cut bonds, run freely,
//! censor again.

use crate::chain::{Cuts, ShuffleParams};
use crate::error::{out_of_range, Result};
use crate::exact::{CensoringScheme, UpdateMask};

/// Phase end times `(t1, t2, t3)` for a given `δ`:
/// `(δ/3, 1 + 2δ/3, 1 + δ) · N² log(kN) / (2kπ²)`.
pub fn phase_times(params: ShuffleParams, delta: f64) -> (f64, f64, f64) {
    let (k, n) = (params.k() as f64, params.n() as f64);
    let base = n * n * (k * n).ln() / (2.0 * k * std::f64::consts::PI.powi(2));
    (
        delta / 3.0 * base,
        (1.0 + 2.0 * delta / 3.0) * base,
        (1.0 + delta) * base,
    )
}

/// `R = ⌈1/δ⌉` blocks; bonds `x_1, …, x_{R−1}` are censored on `[0, t1)` and
/// `[t2, t3)`.
pub fn three_phase_schedule(params: ShuffleParams, delta: f64) -> Result<CensoringScheme> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(out_of_range("delta", format!("{delta} must be positive")));
    }
    let r = (1.0 / delta).ceil() as usize;
    let cuts = Cuts::new(params, r.max(1))?;
    let bonds = cuts.interior_bonds(params.n());
    let censored = UpdateMask::censor_bonds(params, &bonds)?;
    let (t1, t2, t3) = phase_times(params, delta);
    CensoringScheme::new(
        vec![
            (0.0, censored.clone()),
            (t1, UpdateMask::all(params)),
            (t2, censored),
        ],
        t3,
    )
}
