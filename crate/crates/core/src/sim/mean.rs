//! Monte Carlo means of height coordinates.

use rayon::prelude::*;

use crate::chain::{height_of_configuration, height_of_kpermutation, Configuration, KPermutation};
use crate::error::{out_of_range, Error, Result};
use crate::sim::sep::simulate_sep_coupling;
use crate::sim::shuffle::simulate_shuffle_grand_coupling;
use crate::sim::trajectory::SimOptions;

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        if xs.len() < 2 {
            return MeanEstimate { mean, stderr: 0.0 };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        MeanEstimate {
            mean,
            stderr: (var / n).sqrt(),
        }
    }
}

fn check_runs(n_runs: usize, times: &[f64]) -> Result<()> {
    if n_runs < 2 {
        return Err(out_of_range("n_runs", format!("{n_runs} < 2")));
    }
    if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) || times[0] < 0.0 {
        return Err(Error::Validation(
            "times must be nonnegative and increasing".into(),
        ));
    }
    Ok(())
}

/// `E[σ̃_t(x, y)]` for every `(x, y)` and every `t` in `times`, from
/// `n_runs` independent shuffle trajectories started at `sigma0`.
/// Indexed `[time][x * (kN + 1) + y]`.
pub fn mc_shuffle_height_means(
    sigma0: &KPermutation,
    times: &[f64],
    n_runs: usize,
    seed: u64,
) -> Result<Vec<Vec<MeanEstimate>>> {
    check_runs(n_runs, times)?;
    let horizon = times[times.len() - 1].max(f64::MIN_POSITIVE);
    let opts = SimOptions::new(horizon).observe(times.to_vec());
    let n = sigma0.params().n() as f64;
    let samples: Vec<Vec<Vec<f64>>> = (0..n_runs as u64)
        .into_par_iter()
        .map(|r| {
            let traj = simulate_shuffle_grand_coupling(
                std::slice::from_ref(sigma0),
                &opts,
                seed,
                r,
                None,
            )?;
            Ok(traj
                .observations
                .iter()
                .map(|o| {
                    height_of_kpermutation(&o.states[0])
                        .scaled_values()
                        .iter()
                        .map(|&v| v as f64 / n)
                        .collect()
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(summarise(&samples, times.len()))
}

fn summarise(samples: &[Vec<Vec<f64>>], nt: usize) -> Vec<Vec<MeanEstimate>> {
    let width = samples[0][0].len();
    (0..nt)
        .map(|ti| {
            (0..width)
                .map(|c| {
                    let xs: Vec<f64> = samples.iter().map(|s| s[ti][c]).collect();
                    MeanEstimate::from_samples(&xs)
                })
                .collect()
        })
        .collect()
}

/// `E[σ̃_t(x, y)]` at one point.
pub fn mc_mean_height_shuffle(
    sigma0: &KPermutation,
    x: usize,
    y: usize,
    t: f64,
    n_runs: usize,
    seed: u64,
) -> Result<MeanEstimate> {
    let p = sigma0.params();
    if x > p.n() || y > p.cards() {
        return Err(out_of_range("(x, y)", format!("({x}, {y})")));
    }
    if t == 0.0 {
        return Ok(MeanEstimate {
            mean: height_of_kpermutation(sigma0).value(x, y),
            stderr: 0.0,
        });
    }
    let all = mc_shuffle_height_means(sigma0, &[t], n_runs, seed)?;
    Ok(all[0][x * (p.cards() + 1) + y])
}

/// `E[η_t(x)]` for every `x` and `t` in `times`, from exclusion
/// trajectories started at `gamma0`. Indexed `[time][x]`.
pub fn mc_sep_height_means(
    gamma0: &Configuration,
    times: &[f64],
    n_runs: usize,
    seed: u64,
) -> Result<Vec<Vec<MeanEstimate>>> {
    check_runs(n_runs, times)?;
    let horizon = times[times.len() - 1].max(f64::MIN_POSITIVE);
    let opts = SimOptions::new(horizon).observe(times.to_vec());
    let samples: Vec<Vec<Vec<f64>>> = (0..n_runs as u64)
        .into_par_iter()
        .map(|r| {
            let traj = simulate_sep_coupling(std::slice::from_ref(gamma0), &opts, seed, r)?;
            Ok(traj
                .observations
                .iter()
                .map(|o| height_of_configuration(&o.states[0]).values())
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(summarise(&samples, times.len()))
}

pub fn mc_mean_height_sep(
    gamma0: &Configuration,
    x: usize,
    t: f64,
    n_runs: usize,
    seed: u64,
) -> Result<MeanEstimate> {
    if x > gamma0.params().n() {
        return Err(out_of_range("x", format!("{x}")));
    }
    if t == 0.0 {
        return Ok(MeanEstimate {
            mean: height_of_configuration(gamma0).value(x),
            stderr: 0.0,
        });
    }
    Ok(mc_sep_height_means(gamma0, &[t], n_runs, seed)?[0][x])
}
