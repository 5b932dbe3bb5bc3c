//! Area process of the extremal pair, active coordinates, bad sets and the
//! stationary sampler.

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain::{Configuration, HeightFunctionSep, Params};
use crate::error::{out_of_range, Error, Result};
use crate::sim::coalescence::{exp_wait, ExtremalPair};
use crate::sim::rng::replica_rng;
use crate::sim::sep::PrefixState;

/// Snapshot of the extremal pair.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AreaRecord {
    pub t: f64,
    /// `Σ_x (c_top(x) − c_bottom(x))`.
    pub area: i64,
    /// Active coordinates: `x ∈ 1..N` with a gap at `x − 1`, `x` or `x + 1`.
    pub active: Vec<usize>,
    /// `c1[a][b]`: active `x` with `(γ_top(x), γ_top(x+1)) = (a, b)`.
    pub c1: Vec<Vec<u32>>,
    /// Same for the bottom copy.
    pub c2: Vec<Vec<u32>>,
    /// Rates of decrease and increase of the area.
    pub d: i64,
    pub u: i64,
}

impl AreaRecord {
    pub fn from_pair(t: f64, top: &PrefixState, bottom: &PrefixState, k: usize) -> Result<Self> {
        if top.c.len() != bottom.c.len() {
            return Err(Error::DimensionMismatch {
                expected: top.c.len(),
                got: bottom.c.len(),
            });
        }
        let n = top.c.len() - 1;
        let gap: Vec<i64> = top
            .c
            .iter()
            .zip(&bottom.c)
            .map(|(a, b)| (a - b) as i64)
            .collect();
        if let Some(x) = gap.iter().position(|&g| g < 0) {
            return Err(Error::Validation(format!("pair out of order at {x}")));
        }
        let area = gap.iter().sum();
        let active: Vec<usize> = (1..n)
            .filter(|&x| gap[x - 1] > 0 || gap[x] > 0 || gap[x + 1] > 0)
            .collect();
        let mut c1 = vec![vec![0u32; k + 1]; k + 1];
        let mut c2 = vec![vec![0u32; k + 1]; k + 1];
        for &x in &active {
            let (a, b) = top.pair(x);
            c1[a as usize][b as usize] += 1;
            let (a, b) = bottom.pair(x);
            c2[a as usize][b as usize] += 1;
        }
        let ki = k as i64;
        let (mut d, mut u) = (0i64, 0i64);
        for a in 0..=k {
            for b in 0..=k {
                let (ai, bi) = (a as i64, b as i64);
                let (n1, n2) = (c1[a][b] as i64, c2[a][b] as i64);
                d += ai * (ki - bi) * n1 + bi * (ki - ai) * n2;
                u += ai * (ki - bi) * n2 + bi * (ki - ai) * n1;
            }
        }
        Ok(AreaRecord {
            t,
            area,
            active,
            c1,
            c2,
            d,
            u,
        })
    }

    /// `d − u ∈ {0, k, 2k, …, 2k²}`.
    pub fn drift_is_admissible(&self, k: usize) -> bool {
        let diff = self.d - self.u;
        let k = k as i64;
        diff >= 0 && diff <= 2 * k * k && diff % k == 0
    }
}

/// Area records of one extremal-pair replica at increasing `sample_times`.
pub fn area_process(
    params: Params,
    sample_times: &[f64],
    seed: u64,
    replica: u64,
) -> Result<Vec<AreaRecord>> {
    if sample_times.windows(2).any(|w| !(w[1] > w[0])) || sample_times.iter().any(|t| !(*t >= 0.0))
    {
        return Err(Error::Validation(
            "sample times must be nonnegative and increasing".into(),
        ));
    }
    let mut rng = replica_rng(seed, replica);
    let mut pair = ExtremalPair::new(params);
    let rate = pair.rate();
    let mut t = exp_wait(&mut rng, rate);
    let mut out = Vec::with_capacity(sample_times.len());
    for &s in sample_times {
        while t <= s && !pair.coalesced() {
            pair.step(&mut rng);
            t += exp_wait(&mut rng, rate);
        }
        out.push(AreaRecord::from_pair(
            s,
            &pair.top,
            &pair.bottom,
            params.k(),
        )?);
    }
    Ok(out)
}

/// Mean area over replicas, with the paired standard error of consecutive
/// differences (replica `r` contributes to every time point).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AreaSummary {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    /// `mean[i+1] − mean[i]` and its standard error.
    pub step_mean: Vec<f64>,
    pub step_stderr: Vec<f64>,
    /// Records whose `d − u` fell outside the admissible set.
    pub drift_violations: u64,
    pub records: u64,
}

pub fn area_summary(
    params: Params,
    sample_times: &[f64],
    n_runs: usize,
    seed: u64,
) -> Result<AreaSummary> {
    if n_runs < 2 {
        return Err(out_of_range("n_runs", format!("{n_runs} < 2")));
    }
    let runs: Vec<Vec<AreaRecord>> = (0..n_runs as u64)
        .into_par_iter()
        .map(|r| area_process(params, sample_times, seed, r))
        .collect::<Result<_>>()?;
    let nt = sample_times.len();
    let nf = n_runs as f64;
    let values = |i: usize| runs.iter().map(move |r| r[i].area as f64);
    let mean_sd = |xs: Vec<f64>| {
        let m = xs.iter().sum::<f64>() / nf;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (nf - 1.0);
        (m, (v / nf).sqrt())
    };
    let (mut mean, mut stderr) = (Vec::with_capacity(nt), Vec::with_capacity(nt));
    for i in 0..nt {
        let (m, s) = mean_sd(values(i).collect());
        mean.push(m);
        stderr.push(s);
    }
    let (mut step_mean, mut step_stderr) = (Vec::new(), Vec::new());
    for i in 1..nt {
        let diffs: Vec<f64> = values(i).zip(values(i - 1)).map(|(b, a)| b - a).collect();
        let (m, s) = mean_sd(diffs);
        step_mean.push(m);
        step_stderr.push(s);
    }
    let drift_violations = runs
        .iter()
        .flatten()
        .filter(|r| !r.drift_is_admissible(params.k()))
        .count() as u64;
    Ok(AreaSummary {
        times: sample_times.to_vec(),
        mean,
        stderr,
        step_mean,
        step_stderr,
        drift_violations,
        records: (n_runs * nt) as u64,
    })
}

/// Membership in the two families of bad height functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct BadSets {
    /// `max_x |η(x)| ≥ √m log m`.
    pub in_h1: bool,
    /// Some window of `w + 1` consecutive sites is all empty or all full.
    pub in_h2: bool,
}

/// Window length `w = min(N − 1, ⌊2 (N/m) (log m)²⌋)` for the flat-window
/// test: sites `x..=x+w`.
pub fn flat_window(params: Params) -> usize {
    let (n, m) = (params.n() as f64, params.m() as f64);
    let w = (2.0 * n / m * m.ln().powi(2)).floor();
    (w as usize).min(params.n() - 1)
}

pub fn bad_set_membership(eta: &HeightFunctionSep) -> Result<BadSets> {
    let params = eta.params();
    let m = params.m();
    if m < 2 {
        return Err(out_of_range("m", format!("bad sets need m >= 2, got {m}")));
    }
    let mf = m as f64;
    let threshold = mf.sqrt() * mf.ln();
    let in_h1 = eta.values().iter().any(|v| v.abs() >= threshold);
    let gamma = crate::chain::invert_height(eta)?;
    Ok(BadSets {
        in_h1,
        in_h2: has_flat_window(&gamma, flat_window(params)),
    })
}

fn has_flat_window(gamma: &Configuration, w: usize) -> bool {
    let k = gamma.params().k() as u8;
    let g = gamma.gamma();
    g.windows(w + 1)
        .any(|win| win.iter().all(|&v| v == 0) || win.iter().all(|&v| v == k))
}

/// Exact draw from the stationary measure: `m` of the `kN` slots uniformly,
/// slot `s` lying in site `s / k`.
pub fn sample_stationary(params: Params, rng: &mut ChaCha8Rng) -> Configuration {
    let mut gamma = vec![0u8; params.n()];
    for s in sample(rng, params.capacity(), params.m()).iter() {
        gamma[s / params.k()] += 1;
    }
    Configuration::new(params, gamma).expect("slots respect capacity")
}

/// Fractions of `n` stationary samples in `H1`, `H2` and their union.
pub fn bad_set_frequencies(params: Params, n: usize, seed: u64) -> Result<(f64, f64, f64)> {
    let mut rng = replica_rng(seed, 0);
    let (mut h1, mut h2, mut h) = (0usize, 0usize, 0usize);
    for _ in 0..n {
        let g = sample_stationary(params, &mut rng);
        let b = bad_set_membership(&crate::chain::height_of_configuration(&g))?;
        h1 += b.in_h1 as usize;
        h2 += b.in_h2 as usize;
        h += (b.in_h1 || b.in_h2) as usize;
    }
    let nf = n as f64;
    Ok((h1 as f64 / nf, h2 as f64 / nf, h as f64 / nf))
}
