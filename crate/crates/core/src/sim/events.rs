//! Poisson event streams driving the couplings.
//!
//! The `k²` label clocks of a bond (or the per-level clocks of the exclusion
//! coupling) are merged into one clock per bond with the summed rate; labels
//! are drawn uniformly at ring time. By superposition this has the same law
//! as the independent clocks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::sim::rng::replica_rng;

/// One ring of a shuffle clock `(x, i, j)` with its Bernoulli mark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShuffleEvent {
    pub time: f64,
    pub x: usize,
    pub i: usize,
    pub j: usize,
    /// Mark `U = 1`: put the smaller card in packet `x`.
    pub sort: bool,
}

/// Rings of all shuffle clocks, total rate `2k²(N−1)`.
#[derive(Debug, Clone)]
pub struct ShuffleEventStream {
    rng: ChaCha8Rng,
    k: usize,
    n: usize,
    rate: f64,
    time: f64,
    horizon: f64,
}

impl ShuffleEventStream {
    pub fn new(k: usize, n: usize, horizon: f64, seed: u64, replica: u64) -> Self {
        ShuffleEventStream {
            rng: replica_rng(seed, replica),
            k,
            n,
            rate: 2.0 * (k * k * (n - 1)) as f64,
            time: 0.0,
            horizon,
        }
    }

    pub fn total_rate(&self) -> f64 {
        self.rate
    }
}

impl Iterator for ShuffleEventStream {
    type Item = ShuffleEvent;

    fn next(&mut self) -> Option<ShuffleEvent> {
        let gap: f64 = self.rng.sample(Exp1);
        self.time += gap / self.rate;
        if self.time >= self.horizon {
            self.time = self.horizon;
            return None;
        }
        Some(ShuffleEvent {
            time: self.time,
            x: self.rng.random_range(1..self.n),
            i: self.rng.random_range(1..=self.k),
            j: self.rng.random_range(1..=self.k),
            sort: self.rng.random_bool(0.5),
        })
    }
}

/// One candidate ring of the exclusion coupling. `slot` names the
/// `slot`-th smallest distinct value of the prefix count at bond `x` among
/// the tracked states (rejected if there are fewer distinct values);
/// `u` is the shared uniform mark scaled to `0..k²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SepEvent {
    pub time: f64,
    pub x: usize,
    pub up: bool,
    pub slot: usize,
    pub u: u32,
}

/// Candidate rings at rate `2k²(N−1)·slots`: every (bond, level, direction)
/// clock of rate `k²` that can be occupied by one of `slots` tracked states.
#[derive(Debug, Clone)]
pub struct SepEventStream {
    rng: ChaCha8Rng,
    k2: u32,
    n: usize,
    slots: usize,
    rate: f64,
    time: f64,
    horizon: f64,
}

impl SepEventStream {
    pub fn new(k: usize, n: usize, slots: usize, horizon: f64, seed: u64, replica: u64) -> Self {
        SepEventStream {
            rng: replica_rng(seed, replica),
            k2: (k * k) as u32,
            n,
            slots,
            rate: 2.0 * (k * k * (n - 1) * slots) as f64,
            time: 0.0,
            horizon,
        }
    }

    pub fn total_rate(&self) -> f64 {
        self.rate
    }
}

impl Iterator for SepEventStream {
    type Item = SepEvent;

    fn next(&mut self) -> Option<SepEvent> {
        let gap: f64 = self.rng.sample(Exp1);
        self.time += gap / self.rate;
        if self.time >= self.horizon {
            self.time = self.horizon;
            return None;
        }
        Some(SepEvent {
            time: self.time,
            x: self.rng.random_range(1..self.n),
            up: self.rng.random_bool(0.5),
            slot: self.rng.random_range(0..self.slots),
            u: self.rng.random_range(0..self.k2),
        })
    }
}
