//! The extremal pair of the exclusion coupling: coalescence times, survival
//! curves and quantile estimates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use rayon::prelude::*;

use crate::chain::{extremal_states, Params};
use crate::error::{out_of_range, Error, Result};
use crate::sim::rng::replica_rng;
use crate::sim::sep::PrefixState;

/// Top and bottom copies driven by the two-slot coupling, with the area
/// `A = Σ_x (c_top(x) − c_bottom(x))` kept up to date.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalPair {
    pub top: PrefixState,
    pub bottom: PrefixState,
    area: i64,
    k: i32,
    n: usize,
    marks: u32,
}

impl ExtremalPair {
    pub fn new(params: Params) -> Self {
        let (top, bottom) = extremal_states(params);
        let top = PrefixState::from_configuration(&top);
        let bottom = PrefixState::from_configuration(&bottom);
        let area = top
            .c
            .iter()
            .zip(&bottom.c)
            .map(|(a, b)| (a - b) as i64)
            .sum();
        let k = params.k() as u64;
        let marks = (params.n() as u64 - 1) * 2 * 2 * k * k;
        assert!(marks <= u32::MAX as u64, "ring index must fit in u32");
        ExtremalPair {
            top,
            bottom,
            area,
            k: params.k() as i32,
            n: params.n(),
            // bond × direction × slot × mark
            marks: marks as u32,
        }
    }

    /// Candidate ring rate `4k²(N−1)`.
    pub fn rate(&self) -> f64 {
        self.marks as f64
    }

    pub fn area(&self) -> i64 {
        self.area
    }

    pub fn coalesced(&self) -> bool {
        self.area == 0
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Draws and applies one candidate ring; returns whether anything moved.
    #[inline]
    pub fn step(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let k2 = (self.k * self.k) as u32;
        let mut idx = rng.random_range(0..self.marks);
        let u = idx % k2;
        idx /= k2;
        let slot = idx % 2;
        idx /= 2;
        let up = idx % 2 == 0;
        let x = (idx / 2) as usize + 1;
        let (zt, zb) = (self.top.c[x], self.bottom.c[x]);
        // top dominates, so the smaller level is the bottom's
        let (hit_top, hit_bottom) = match (zt == zb, slot) {
            (true, 0) => (true, true),
            (true, _) => return false,
            (false, 0) => (false, true),
            (false, _) => (true, false),
        };
        let mut moved = false;
        let delta = if up { 1 } else { -1 };
        if hit_top && self.top.ring(x, up, u, self.k) {
            self.area += delta;
            moved = true;
        }
        if hit_bottom && self.bottom.ring(x, up, u, self.k) {
            self.area -= delta;
            moved = true;
        }
        moved
    }
}

/// Result of one replica.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoalescenceOutcome {
    Coalesced {
        time: f64,
        events: u64,
    },
    /// The event cap was hit; coalescence happens after `time`.
    Censored {
        time: f64,
        events: u64,
    },
}

impl CoalescenceOutcome {
    pub fn time(&self) -> f64 {
        match *self {
            CoalescenceOutcome::Coalesced { time, .. }
            | CoalescenceOutcome::Censored { time, .. } => time,
        }
    }

    pub fn events(&self) -> u64 {
        match *self {
            CoalescenceOutcome::Coalesced { events, .. }
            | CoalescenceOutcome::Censored { events, .. } => events,
        }
    }

    /// Whether the pair is known or assumed still apart at `t`. Censored runs
    /// count as apart, which can only raise the survival estimate.
    pub fn apart_at(&self, t: f64) -> bool {
        match *self {
            CoalescenceOutcome::Coalesced { time, .. } => time > t,
            CoalescenceOutcome::Censored { .. } => true,
        }
    }
}

/// Runs one replica to coalescence.
///
/// Candidate rings form a Poisson process of constant rate independent of
/// their marks, so the time of the `K`-th ring is `Gamma(K, 1)/rate`; it is
/// sampled once at the end instead of accumulating `K` exponentials.
pub fn coalescence_time(
    params: Params,
    seed: u64,
    replica: u64,
    event_cap: u64,
) -> CoalescenceOutcome {
    let mut rng = replica_rng(seed, replica);
    let mut pair = ExtremalPair::new(params);
    let mut events = 0u64;
    while !pair.coalesced() && events < event_cap {
        pair.step(&mut rng);
        events += 1;
    }
    let time = if events == 0 {
        0.0
    } else {
        Gamma::new(events as f64, 1.0)
            .expect("positive shape")
            .sample(&mut rng)
            / pair.rate()
    };
    if pair.coalesced() {
        CoalescenceOutcome::Coalesced { time, events }
    } else {
        CoalescenceOutcome::Censored { time, events }
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// One point of a survival curve.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SurvivalPoint {
    pub t: f64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Per-replica outcomes for the extremal pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalescenceEstimate {
    pub params: Params,
    pub outcomes: Vec<CoalescenceOutcome>,
}

impl CoalescenceEstimate {
    pub fn n_runs(&self) -> usize {
        self.outcomes.len()
    }

    pub fn censored(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o, CoalescenceOutcome::Censored { .. }))
            .count()
    }

    pub fn total_events(&self) -> u64 {
        self.outcomes.iter().map(|o| o.events()).sum()
    }

    /// `P̂(top_t ≠ bottom_t)` with Wilson intervals at `z`.
    pub fn survival(&self, times: &[f64], z: f64) -> Vec<SurvivalPoint> {
        let n = self.outcomes.len() as u64;
        times
            .iter()
            .map(|&t| {
                let apart = self.outcomes.iter().filter(|o| o.apart_at(t)).count() as u64;
                let (ci_lo, ci_hi) = wilson_interval(apart, n, z);
                SurvivalPoint {
                    t,
                    p_hat: apart as f64 / n as f64,
                    ci_lo,
                    ci_hi,
                }
            })
            .collect()
    }

    /// Sorted coalescence times (censored runs placed last at their bound).
    pub fn sorted_times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self
            .outcomes
            .iter()
            .map(|o| match o {
                CoalescenceOutcome::Coalesced { time, .. } => *time,
                CoalescenceOutcome::Censored { .. } => f64::INFINITY,
            })
            .collect();
        t.sort_by(f64::total_cmp);
        t
    }

    /// First time the empirical survival drops to `eps` or below, i.e. the
    /// empirical `(1 − eps)` quantile of the coalescence time, with a
    /// distribution-free order-statistic interval at `z`.
    pub fn threshold_time(&self, eps: f64, z: f64) -> Result<QuantileEstimate> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(out_of_range("eps", format!("{eps}")));
        }
        let times = self.sorted_times();
        let n = times.len();
        if n == 0 {
            return Err(Error::Validation("no replicas".into()));
        }
        let q = 1.0 - eps;
        let rank = |r: f64| -> f64 {
            let idx = (r.ceil() as isize - 1).clamp(0, n as isize - 1) as usize;
            times[idx]
        };
        let nf = n as f64;
        let spread = z * (nf * q * (1.0 - q)).sqrt();
        Ok(QuantileEstimate {
            eps,
            value: rank(nf * q),
            lo: rank(nf * q - spread),
            hi: rank(nf * q + spread + 1.0),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuantileEstimate {
    pub eps: f64,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Independent replicas `0..n_runs` of [`coalescence_time`], in parallel.
pub fn coalescence_estimate(
    params: Params,
    n_runs: usize,
    seed: u64,
    event_cap: u64,
) -> CoalescenceEstimate {
    let outcomes = (0..n_runs as u64)
        .into_par_iter()
        .map(|r| coalescence_time(params, seed, r, event_cap))
        .collect();
    CoalescenceEstimate { params, outcomes }
}

/// Exponential waiting time for a clock of rate `rate`.
pub(crate) fn exp_wait(rng: &mut ChaCha8Rng, rate: f64) -> f64 {
    let e: f64 = rng.sample(Exp1);
    e / rate
}
