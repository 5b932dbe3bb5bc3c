//! Discrete heat equation `∂_t f = k Δ_x f` on `{0..N}` with zero boundary
//! values, solved by sine expansion; and the exponential envelopes for the
//! mean shuffle height.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::eigen::{gap, lambda_unchecked};

/// A profile `f(x)` for `x = 0..=N` with `f(0) = f(N) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatProfile {
    values: Vec<f64>,
}

impl HeatProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::Validation("profile needs N >= 2".into()));
        }
        let (first, last) = (values[0], values[values.len() - 1]);
        if first != 0.0 || last != 0.0 {
            return Err(Error::Validation(format!(
                "boundary values must vanish, got {first} and {last}"
            )));
        }
        Ok(HeatProfile { values })
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, x: usize) -> f64 {
        self.values[x]
    }

    /// Discrete sine coefficients `c_j = (2/N) Σ_x f(x) sin(jπx/N)`,
    /// `j = 1..N−1`.
    pub fn sine_coefficients(&self) -> Vec<f64> {
        let n = self.n();
        (1..n)
            .map(|j| {
                2.0 / n as f64
                    * (1..n)
                        .map(|x| self.values[x] * (j as f64 * PI * x as f64 / n as f64).sin())
                        .sum::<f64>()
            })
            .collect()
    }
}

/// Solution at time `t`: mode `j` decays at rate `λ_{N,k,j}`.
pub fn heat_solution(initial: &HeatProfile, k: usize, t: f64) -> Result<HeatProfile> {
    if !(t >= 0.0) {
        return Err(crate::error::out_of_range("t", format!("{t}")));
    }
    let n = initial.n();
    let coeffs = initial.sine_coefficients();
    let decay: Vec<f64> = (1..n)
        .map(|j| (-lambda_unchecked(n, k, j as f64) * t).exp())
        .collect();
    let mut values = vec![0.0; n + 1];
    for (x, v) in values.iter_mut().enumerate().take(n).skip(1) {
        *v = coeffs
            .iter()
            .zip(&decay)
            .enumerate()
            .map(|(idx, (c, d))| c * d * ((idx + 1) as f64 * PI * x as f64 / n as f64).sin())
            .sum();
    }
    HeatProfile::new(values)
}

/// `max_x E[σ̃_t(x, y)] ≤ 4 min(y, kN − y) e^{−λ_1 t}` for every start.
pub fn mean_height_upper_envelope(k: usize, n: usize, y: usize, t: f64) -> f64 {
    4.0 * y.min(k * n - y) as f64 * (-gap(n, k) * t).exp()
}

/// `max_{x,y} E[σ̃_t(x, y)] ≤ 2kN e^{−λ_1 t}`.
pub fn mean_height_global_envelope(k: usize, n: usize, t: f64) -> f64 {
    2.0 * (k * n) as f64 * (-gap(n, k) * t).exp()
}

/// From the top start: `E[σ̃_t(x, y)] ≥ (min(y, kN − y)/π) sin(xπ/N) e^{−λ_1 t}`.
pub fn mean_height_lower_envelope_from_top(k: usize, n: usize, x: usize, y: usize, t: f64) -> f64 {
    y.min(k * n - y) as f64 / PI * (x as f64 * PI / n as f64).sin() * (-gap(n, k) * t).exp()
}

/// `σ̃(x, y)` of the top k-permutation: `min(kx, y) − xy/N`.
pub fn top_height_profile(k: usize, n: usize, y: usize) -> HeatProfile {
    let values = (0..=n)
        .map(|x| (k * x).min(y) as f64 - (x * y) as f64 / n as f64)
        .collect();
    HeatProfile::new(values).expect("top profile vanishes at the ends")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_stays_zero() {
        let p = HeatProfile::new(vec![0.0; 6]).unwrap();
        let s = heat_solution(&p, 2, 3.0).unwrap();
        assert!(s.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn pure_mode_decays() {
        let n = 7;
        let init: Vec<f64> = (0..=n).map(|x| (PI * x as f64 / n as f64).sin()).collect();
        let mut init = init;
        init[n] = 0.0;
        let p = HeatProfile::new(init.clone()).unwrap();
        let t = 0.9;
        let s = heat_solution(&p, 3, t).unwrap();
        let d = (-gap(n, 3) * t).exp();
        for x in 0..=n {
            assert!((s.at(x) - init[x] * d).abs() < 1e-13);
        }
    }

    #[test]
    fn expansion_reconstructs_initial_data() {
        let p = HeatProfile::new(vec![0.0, 1.5, -0.25, 2.0, 0.0]).unwrap();
        let s = heat_solution(&p, 1, 0.0).unwrap();
        for x in 0..=4 {
            assert!((s.at(x) - p.at(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn matches_explicit_euler() {
        // fine explicit Euler on k Δ as an independent integrator
        let k = 2;
        let init = top_height_profile(k, 6, 5);
        let t = 0.4;
        let steps = 40_000;
        let dt = t / steps as f64;
        let mut f = init.values().to_vec();
        for _ in 0..steps {
            let prev = f.clone();
            for x in 1..6 {
                f[x] += dt * k as f64 * (prev[x + 1] - 2.0 * prev[x] + prev[x - 1]);
            }
        }
        let s = heat_solution(&init, k, t).unwrap();
        for x in 0..=6 {
            assert!((s.at(x) - f[x]).abs() < 1e-4);
        }
    }

    #[test]
    fn envelopes_hold_for_top_profile() {
        for (k, n) in [(1, 8), (2, 16), (3, 10)] {
            for y in 0..=k * n {
                let init = top_height_profile(k, n, y);
                for &t in &[0.0, 1.0, 5.0, 20.0] {
                    let s = heat_solution(&init, k, t).unwrap();
                    let up = mean_height_upper_envelope(k, n, y, t);
                    for x in 0..=n {
                        assert!(s.at(x) <= up + 1e-12);
                        assert!(s.at(x) <= mean_height_global_envelope(k, n, t) + 1e-12);
                        assert!(
                            s.at(x) >= mean_height_lower_envelope_from_top(k, n, x, y, t) - 1e-12
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_violation_rejected() {
        assert!(HeatProfile::new(vec![0.0, 1.0, 0.5]).is_err());
    }
}
