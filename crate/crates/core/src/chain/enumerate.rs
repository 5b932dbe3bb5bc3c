//! Exhaustive enumeration of the two state spaces, in lexicographic order.

use std::collections::HashMap;
use std::hash::Hash;

use crate::chain::params::{Params, ShuffleParams};
use crate::chain::state::{Configuration, KPermutation};
use crate::error::{Error, Result};

/// Default cap on enumerated state counts.
pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Number of configurations in `Omega_{k,N,m}`, by dynamic programming,
/// saturating at `u128::MAX`.
pub fn configuration_count(params: Params) -> u128 {
    let (k, m) = (params.k(), params.m());
    let mut ways = vec![0u128; m + 1];
    ways[0] = 1;
    for _ in 0..params.n() {
        let mut next = vec![0u128; m + 1];
        for (total, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for g in 0..=k.min(m - total) {
                next[total + g] = next[total + g].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[m]
}

/// `(kN)! / (k!)^N`, saturating at `u128::MAX`.
pub fn kpermutation_count(params: ShuffleParams) -> u128 {
    // product over packets of binom(remaining, k)
    let k = params.k() as u128;
    let mut remaining = params.cards() as u128;
    let mut total: u128 = 1;
    for _ in 0..params.n() {
        let b = binomial_u128(remaining, k);
        total = match total.checked_mul(b) {
            Some(v) => v,
            None => return u128::MAX,
        };
        remaining -= k;
    }
    total
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Every configuration of `Omega_{k,N,m}` in lexicographic order of the
/// occupancy vector.
pub fn enumerate_configurations(params: Params, cap: usize) -> Result<Vec<Configuration>> {
    let count = configuration_count(params);
    if count == 0 {
        return Err(Error::EmptySpace(format!("{params:?}")));
    }
    if count > cap as u128 {
        return Err(Error::BudgetExceeded {
            what: "configurations",
            needed: count,
            cap: cap as u128,
        });
    }
    let (k, n, m) = (params.k(), params.n(), params.m());
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![0u8; n];
    fn rec(
        site: usize,
        left: usize,
        k: usize,
        n: usize,
        params: Params,
        current: &mut Vec<u8>,
        out: &mut Vec<Configuration>,
    ) {
        if site == n {
            if left == 0 {
                out.push(Configuration::from_raw(params, current.clone()));
            }
            return;
        }
        let room_after = (n - site - 1) * k;
        let lo = left.saturating_sub(room_after);
        let hi = left.min(k);
        for g in lo..=hi {
            current[site] = g as u8;
            rec(site + 1, left - g, k, n, params, current, out);
        }
    }
    rec(0, m, k, n, params, &mut current, &mut out);
    Ok(out)
}

/// Every k-permutation, lexicographic in the flat (packet-by-packet, sorted)
/// card list.
pub fn enumerate_kpermutations(params: ShuffleParams, cap: usize) -> Result<Vec<KPermutation>> {
    let count = kpermutation_count(params);
    if count > cap as u128 {
        return Err(Error::BudgetExceeded {
            what: "k-permutations",
            needed: count,
            cap: cap as u128,
        });
    }
    let k = params.k();
    let total = params.cards();
    let mut out = Vec::with_capacity(count as usize);
    let mut used = vec![false; total + 1];
    let mut cards = Vec::with_capacity(total);

    fn fill_packet(
        start: u16,
        params: ShuffleParams,
        k: usize,
        total: usize,
        used: &mut Vec<bool>,
        cards: &mut Vec<u16>,
        out: &mut Vec<KPermutation>,
    ) {
        if cards.len() == total {
            out.push(KPermutation::from_sorted_raw(params, cards.clone()));
            return;
        }
        let in_packet = cards.len() % k;
        for c in start..=total as u16 {
            if used[c as usize] {
                continue;
            }
            used[c as usize] = true;
            cards.push(c);
            let next_start = if in_packet + 1 == k { 1 } else { c + 1 };
            fill_packet(next_start, params, k, total, used, cards, out);
            cards.pop();
            used[c as usize] = false;
        }
    }
    fill_packet(1, params, k, total, &mut used, &mut cards, &mut out);
    Ok(out)
}

/// An enumerated state space with a reverse index.
#[derive(Debug, Clone)]
pub struct StateSpace<S> {
    states: Vec<S>,
    index: HashMap<S, usize>,
}

impl<S: Clone + Eq + Hash> StateSpace<S> {
    pub fn from_states(states: Vec<S>) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        StateSpace { states, index }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &S {
        &self.states[i]
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }
}

pub type SepSpace = StateSpace<Configuration>;
pub type ShuffleSpace = StateSpace<KPermutation>;

pub fn sep_space(params: Params, cap: usize) -> Result<SepSpace> {
    Ok(StateSpace::from_states(enumerate_configurations(
        params, cap,
    )?))
}

pub fn shuffle_space(params: ShuffleParams, cap: usize) -> Result<ShuffleSpace> {
    Ok(StateSpace::from_states(enumerate_kpermutations(
        params, cap,
    )?))
}
