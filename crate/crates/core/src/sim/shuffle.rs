//! Grand coupling of the packet shuffle.
//!
//! A ring `(x, i, j, U)` looks at the `i`-th smallest card `a` of packet `x`
//! and the `j`-th smallest card `b` of packet `x+1` in every tracked copy,
//! and swaps them when `U = 1, b < a` (sort) or `U = 0, b > a` (reverse
//! sort). Labels are re-evaluated in each copy at ring time.

use crate::chain::{compare_kpermutations, KPermutation};
use crate::error::{Error, Result};
use crate::exact::CensoringScheme;
use crate::sim::events::{ShuffleEvent, ShuffleEventStream};
use crate::sim::trajectory::{CoupledTrajectory, Observation, RunStats, SimOptions};

/// Prefix card counts `C(x, y) = Σ_{z ≤ x} |σ(z) ∩ [y]|`, row-major in `x`.
#[derive(Debug, Clone)]
struct PrefixTable {
    width: usize,
    counts: Vec<i32>,
}

impl PrefixTable {
    fn new(sigma: &KPermutation) -> Self {
        let p = sigma.params();
        let width = p.cards() + 1;
        let mut counts = vec![0i32; (p.n() + 1) * width];
        for x in 1..=p.n() {
            let (prev, row) = counts.split_at_mut(x * width);
            row[..width].copy_from_slice(&prev[(x - 1) * width..x * width]);
            for &c in sigma.packet(x) {
                for v in &mut row[c as usize..width] {
                    *v += 1;
                }
            }
        }
        PrefixTable { width, counts }
    }

    /// Card `out` leaves packet `x`, card `inn` enters it.
    fn exchange(&mut self, x: usize, out: u16, inn: u16) {
        let row = &mut self.counts[x * self.width..(x + 1) * self.width];
        let (out, inn) = (out as usize, inn as usize);
        if inn < out {
            for v in &mut row[inn..out] {
                *v += 1;
            }
        } else {
            for v in &mut row[out..inn] {
                *v -= 1;
            }
        }
    }

    fn row(&self, x: usize) -> &[i32] {
        &self.counts[x * self.width..(x + 1) * self.width]
    }
}

/// Applies one ring to a copy; returns the exchanged cards if it moved.
pub fn apply_shuffle_event(sigma: &mut KPermutation, e: &ShuffleEvent) -> Option<(u16, u16)> {
    let a = sigma.packet(e.x)[e.i - 1];
    let b = sigma.packet(e.x + 1)[e.j - 1];
    let swap = if e.sort { b < a } else { b > a };
    if swap {
        sigma.swap_in_place(e.x, e.i, e.j);
        Some((a, b))
    } else {
        None
    }
}

pub(crate) fn ordered_pairs<S>(
    states: &[S],
    cmp: impl Fn(&S, &S) -> Result<crate::chain::OrderRelation>,
) -> Result<Vec<(usize, usize)>> {
    // (hi, lo) with hi >= lo
    let mut pairs = Vec::new();
    for a in 0..states.len() {
        for b in a + 1..states.len() {
            match cmp(&states[a], &states[b])? {
                crate::chain::OrderRelation::Geq | crate::chain::OrderRelation::Eq => {
                    pairs.push((a, b))
                }
                crate::chain::OrderRelation::Leq => pairs.push((b, a)),
                crate::chain::OrderRelation::Incomparable => {}
            }
        }
    }
    Ok(pairs)
}

/// Runs the grand coupling from `initials` on `[0, horizon]`, skipping rings
/// censored by `scheme` (which must cover the horizon).
pub fn simulate_shuffle_grand_coupling(
    initials: &[KPermutation],
    options: &SimOptions,
    seed: u64,
    replica: u64,
    scheme: Option<&CensoringScheme>,
) -> Result<CoupledTrajectory<KPermutation, ShuffleEvent>> {
    options.validate()?;
    let Some(first) = initials.first() else {
        return Err(Error::Validation("no initial states".into()));
    };
    let params = first.params();
    if initials.iter().any(|s| s.params() != params) {
        return Err(Error::ParamsMismatch(
            "initial states differ in size".into(),
        ));
    }
    if let Some(s) = scheme {
        if s.params() != params {
            return Err(Error::ParamsMismatch("scheme and states differ".into()));
        }
        if s.horizon() < options.horizon {
            return Err(Error::Validation(
                "scheme horizon shorter than the run".into(),
            ));
        }
    }
    let pairs = if options.check_order {
        ordered_pairs(initials, compare_kpermutations)?
    } else {
        Vec::new()
    };
    let mut tables: Vec<PrefixTable> = if options.check_order {
        initials.iter().map(PrefixTable::new).collect()
    } else {
        Vec::new()
    };

    let mut states = initials.to_vec();
    let mut stats = RunStats::default();
    let mut log = options.record_log.then(Vec::new);
    let mut observations = Vec::with_capacity(options.observe.len());
    let mut next_obs = 0;
    let stream = ShuffleEventStream::new(params.k(), params.n(), options.horizon, seed, replica);

    for e in stream {
        while next_obs < options.observe.len() && options.observe[next_obs] < e.time {
            observations.push(Observation {
                time: options.observe[next_obs],
                states: states.clone(),
            });
            next_obs += 1;
        }
        stats.rings += 1;
        if let Some(s) = scheme {
            if !s.mask_at(e.time).allows(e.x, e.i, e.j) {
                stats.censored += 1;
                continue;
            }
        }
        let mut moved = false;
        for (idx, sigma) in states.iter_mut().enumerate() {
            if let Some((a, b)) = apply_shuffle_event(sigma, &e) {
                moved = true;
                stats.moves += 1;
                if let Some(t) = tables.get_mut(idx) {
                    t.exchange(e.x, a, b);
                }
            }
        }
        if moved {
            stats.effective += 1;
            for &(hi, lo) in &pairs {
                stats.order_checks += 1;
                let (rh, rl) = (tables[hi].row(e.x), tables[lo].row(e.x));
                if rh.iter().zip(rl).any(|(h, l)| h < l) {
                    stats.violations += 1;
                }
            }
        }
        if let Some(l) = log.as_mut() {
            l.push(e);
        }
    }
    for &t in &options.observe[next_obs..] {
        observations.push(Observation {
            time: t,
            states: states.clone(),
        });
    }
    Ok(CoupledTrajectory {
        initials: initials.to_vec(),
        finals: states,
        observations,
        log,
        stats,
        horizon: options.horizon,
    })
}
