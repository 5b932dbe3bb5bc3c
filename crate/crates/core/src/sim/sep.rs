//! Monotone coupling of the exclusion process on prefix counts.
//!
//! Each (bond `x`, level `z`, direction) carries a rate-`k²` clock. A ring
//! affects exactly the copies whose prefix count `c(x)` equals `z`: with
//! `(a, b) = (γ(x), γ(x+1))`, an up ring raises `c(x)` (a particle jumps
//! from `x+1` to `x`) when `u < b(k − a)`, a down ring lowers it when
//! `u < a(k − b)`, for a mark `u` uniform on `0..k²` shared by all copies.
//! Levels are not materialised: candidate rings are drawn for `slots`
//! virtual clocks per bond and direction, and slot `s` stands for the
//! `s`-th smallest level currently present at the bond.

use crate::chain::{compare_configurations, Configuration, Params};
use crate::error::{Error, Result};
use crate::sim::events::{SepEvent, SepEventStream};
use crate::sim::shuffle::ordered_pairs;
use crate::sim::trajectory::{CoupledTrajectory, Observation, RunStats, SimOptions};

/// A configuration stored as prefix counts `c(0..=N)`, `c(0) = 0`, `c(N) = m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrefixState {
    pub c: Vec<i32>,
}

impl PrefixState {
    pub fn from_configuration(gamma: &Configuration) -> Self {
        PrefixState {
            c: gamma.prefix_counts().iter().map(|&v| v as i32).collect(),
        }
    }

    pub fn to_configuration(&self, params: Params) -> Configuration {
        let gamma = self.c.windows(2).map(|w| (w[1] - w[0]) as u8).collect();
        Configuration::new(params, gamma).expect("prefix counts stay admissible")
    }

    /// `(γ(x), γ(x+1))` for bond `x`.
    #[inline]
    pub fn pair(&self, x: usize) -> (i32, i32) {
        (self.c[x] - self.c[x - 1], self.c[x + 1] - self.c[x])
    }

    /// Applies an up (`+1`) or down (`−1`) ring that has been matched to this
    /// copy's level. Returns whether `c(x)` changed.
    #[inline]
    pub fn ring(&mut self, x: usize, up: bool, u: u32, k: i32) -> bool {
        let (a, b) = self.pair(x);
        if up {
            if (u as i32) < b * (k - a) {
                self.c[x] += 1;
                return true;
            }
        } else if (u as i32) < a * (k - b) {
            self.c[x] -= 1;
            return true;
        }
        false
    }
}

/// The level a slot refers to among `values`, if any.
#[inline]
pub(crate) fn level_for_slot(values: &mut Vec<i32>, slot: usize) -> Option<i32> {
    values.sort_unstable();
    values.dedup();
    values.get(slot).copied()
}

/// Runs the coupling from `initials` on `[0, horizon]`.
pub fn simulate_sep_coupling(
    initials: &[Configuration],
    options: &SimOptions,
    seed: u64,
    replica: u64,
) -> Result<CoupledTrajectory<Configuration, SepEvent>> {
    options.validate()?;
    let Some(first) = initials.first() else {
        return Err(Error::Validation("no initial states".into()));
    };
    let params = first.params();
    if initials.iter().any(|s| s.params() != params) {
        return Err(Error::ParamsMismatch(
            "initial states differ in parameters".into(),
        ));
    }
    let k = params.k() as i32;
    let pairs = if options.check_order {
        ordered_pairs(initials, compare_configurations)?
    } else {
        Vec::new()
    };
    let mut states: Vec<PrefixState> = initials
        .iter()
        .map(PrefixState::from_configuration)
        .collect();
    let mut stats = RunStats::default();
    let mut log = options.record_log.then(Vec::new);
    let mut observations = Vec::with_capacity(options.observe.len());
    let mut next_obs = 0;
    let mut levels = Vec::with_capacity(states.len());
    let snapshot = |states: &[PrefixState]| -> Vec<Configuration> {
        states.iter().map(|s| s.to_configuration(params)).collect()
    };
    let stream = SepEventStream::new(
        params.k(),
        params.n(),
        states.len(),
        options.horizon,
        seed,
        replica,
    );
    for e in stream {
        while next_obs < options.observe.len() && options.observe[next_obs] < e.time {
            observations.push(Observation {
                time: options.observe[next_obs],
                states: snapshot(&states),
            });
            next_obs += 1;
        }
        stats.rings += 1;
        if let Some(l) = log.as_mut() {
            l.push(e);
        }
        levels.clear();
        levels.extend(states.iter().map(|s| s.c[e.x]));
        let Some(z) = level_for_slot(&mut levels, e.slot) else {
            continue;
        };
        let mut moved = false;
        for s in states.iter_mut().filter(|s| s.c[e.x] == z) {
            if s.ring(e.x, e.up, e.u, k) {
                moved = true;
                stats.moves += 1;
            }
        }
        if moved {
            stats.effective += 1;
            for &(hi, lo) in &pairs {
                stats.order_checks += 1;
                if states[hi].c[e.x] < states[lo].c[e.x] {
                    stats.violations += 1;
                }
            }
        }
    }
    for &t in &options.observe[next_obs..] {
        observations.push(Observation {
            time: t,
            states: snapshot(&states),
        });
    }
    Ok(CoupledTrajectory {
        initials: initials.to_vec(),
        finals: snapshot(&states),
        observations,
        log,
        stats,
        horizon: options.horizon,
    })
}
