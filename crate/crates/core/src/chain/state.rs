//! The two state types: particle configurations and k-permutations
//! ("decks of packets"), plus plain permutations of the card set.

use std::fmt;
use std::str::FromStr;

use crate::chain::params::{Params, ShuffleParams};
use crate::error::{Error, Result};

/// Occupancy vector of the capacity-k exclusion process.
///
/// Sites are 1-based in the public API (`occupancy(1)` is the leftmost site).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    gamma: Vec<u8>,
    params: Params,
}

impl Configuration {
    pub fn new(params: Params, gamma: Vec<u8>) -> Result<Self> {
        if gamma.len() != params.n() {
            return Err(Error::Validation(format!(
                "configuration has {} sites, expected N = {}",
                gamma.len(),
                params.n()
            )));
        }
        if let Some(&g) = gamma.iter().find(|&&g| g as usize > params.k()) {
            return Err(Error::Validation(format!(
                "occupancy {g} exceeds capacity k = {}",
                params.k()
            )));
        }
        let total: usize = gamma.iter().map(|&g| g as usize).sum();
        if total != params.m() {
            return Err(Error::Validation(format!(
                "configuration holds {total} particles, expected m = {}",
                params.m()
            )));
        }
        Ok(Configuration { gamma, params })
    }

    pub(crate) fn from_raw(params: Params, gamma: Vec<u8>) -> Self {
        debug_assert_eq!(gamma.len(), params.n());
        Configuration { gamma, params }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn gamma(&self) -> &[u8] {
        &self.gamma
    }

    pub fn into_gamma(self) -> Vec<u8> {
        self.gamma
    }

    /// Particle count at site `x` (1-based).
    pub fn occupancy(&self, x: usize) -> usize {
        self.gamma[x - 1] as usize
    }

    /// Prefix sums `c(x) = sum_{z <= x} gamma(z)` for `x = 0..=N`.
    pub fn prefix_counts(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.gamma.len() + 1);
        let mut acc = 0i64;
        out.push(0);
        for &g in &self.gamma {
            acc += g as i64;
            out.push(acc);
        }
        out
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} N={} m={} :",
            self.params.k(),
            self.params.n(),
            self.params.m()
        )?;
        for g in &self.gamma {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

fn parse_header(header: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != keys.len() {
        return Err(Error::Parse(format!(
            "expected header {keys:?}, got {header:?}"
        )));
    }
    fields
        .iter()
        .zip(keys)
        .map(|(field, key)| {
            let (name, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("malformed header field {field:?}")))?;
            if name != *key {
                return Err(Error::Parse(format!("expected key {key}, got {name}")));
            }
            value
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{key}: {e}")))
        })
        .collect()
}

impl FromStr for Configuration {
    type Err = Error;

    /// Parses `"k=2 N=3 m=2 : 1 1 0"`.
    fn from_str(s: &str) -> Result<Self> {
        let (header, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing ':' separator".into()))?;
        let v = parse_header(header, &["k", "N", "m"])?;
        let params = Params::new(v[0], v[1], v[2])?;
        let gamma = body
            .split_whitespace()
            .map(|t| {
                t.parse::<u8>()
                    .map_err(|e| Error::Parse(format!("occupancy {t:?}: {e}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Configuration::new(params, gamma)
    }
}

/// A k-permutation: an ordered sequence of `N` disjoint `k`-subsets of
/// `{1, ..., kN}`. Packet `x` is stored sorted at `cards[(x-1)k .. xk]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KPermutation {
    cards: Vec<u16>,
    params: ShuffleParams,
}

impl KPermutation {
    /// Builds from packets given in any internal order.
    pub fn from_blocks(params: ShuffleParams, blocks: &[Vec<u16>]) -> Result<Self> {
        if blocks.len() != params.n() {
            return Err(Error::Validation(format!(
                "{} packets given, expected N = {}",
                blocks.len(),
                params.n()
            )));
        }
        if let Some(b) = blocks.iter().find(|b| b.len() != params.k()) {
            return Err(Error::Validation(format!(
                "packet {b:?} does not have exactly k = {} cards",
                params.k()
            )));
        }
        let flat: Vec<u16> = blocks.iter().flatten().copied().collect();
        Self::from_flat(params, flat)
    }

    /// Builds from a flat card list where consecutive runs of `k` cards form
    /// the packets; each run is sorted.
    pub fn from_flat(params: ShuffleParams, mut cards: Vec<u16>) -> Result<Self> {
        let total = params.cards();
        if cards.len() != total {
            return Err(Error::Validation(format!(
                "{} cards given, expected kN = {total}",
                cards.len()
            )));
        }
        let mut seen = vec![false; total + 1];
        for &c in &cards {
            let c = c as usize;
            if c == 0 || c > total {
                return Err(Error::Validation(format!("card {c} outside 1..={total}")));
            }
            if seen[c] {
                return Err(Error::Validation(format!("card {c} appears twice")));
            }
            seen[c] = true;
        }
        for block in cards.chunks_mut(params.k()) {
            block.sort_unstable();
        }
        Ok(KPermutation { cards, params })
    }

    pub(crate) fn from_sorted_raw(params: ShuffleParams, cards: Vec<u16>) -> Self {
        KPermutation { cards, params }
    }

    /// The maximal element: packet `x` holds `{(x-1)k+1, ..., xk}`.
    pub fn top(params: ShuffleParams) -> Self {
        let cards = (1..=params.cards() as u16).collect();
        KPermutation { cards, params }
    }

    /// The minimal element: packets in reverse order.
    pub fn bottom(params: ShuffleParams) -> Self {
        let k = params.k();
        let n = params.n();
        let mut cards = Vec::with_capacity(k * n);
        for x in 0..n {
            let start = (n - 1 - x) * k;
            cards.extend((start + 1..=start + k).map(|c| c as u16));
        }
        KPermutation { cards, params }
    }

    pub fn params(&self) -> ShuffleParams {
        self.params
    }

    /// Flat card list, packet by packet, each packet sorted.
    pub fn cards(&self) -> &[u16] {
        &self.cards
    }

    /// Packet `x` (1-based), sorted increasingly.
    pub fn packet(&self, x: usize) -> &[u16] {
        let k = self.params.k();
        &self.cards[(x - 1) * k..x * k]
    }

    /// `result[c - 1]` is the 1-based packet holding card `c`.
    pub fn packet_of_cards(&self) -> Vec<u16> {
        let k = self.params.k();
        let mut pos = vec![0u16; self.cards.len()];
        for (slot, &c) in self.cards.iter().enumerate() {
            pos[c as usize - 1] = (slot / k + 1) as u16;
        }
        pos
    }

    /// Applies the swap of the `i`-th smallest card of packet `x` with the
    /// `j`-th smallest card of packet `x+1` (all 1-based).
    pub fn swapped(&self, x: usize, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.swap_in_place(x, i, j);
        out
    }

    pub(crate) fn swap_in_place(&mut self, x: usize, i: usize, j: usize) {
        let k = self.params.k();
        let left = (x - 1) * k;
        let right = x * k;
        self.cards.swap(left + i - 1, right + j - 1);
        resort_slot(&mut self.cards[left..left + k], i - 1);
        resort_slot(&mut self.cards[right..right + k], j - 1);
    }
}

/// Restores sorted order after the element at `slot` was overwritten.
pub(crate) fn resort_slot(block: &mut [u16], mut slot: usize) {
    while slot > 0 && block[slot - 1] > block[slot] {
        block.swap(slot - 1, slot);
        slot -= 1;
    }
    while slot + 1 < block.len() && block[slot + 1] < block[slot] {
        block.swap(slot, slot + 1);
        slot += 1;
    }
}

impl fmt::Display for KPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} N={} : ", self.params.k(), self.params.n())?;
        for (x, block) in self.cards.chunks(self.params.k()).enumerate() {
            if x > 0 {
                f.write_str("|")?;
            }
            f.write_str("{")?;
            for (i, c) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl FromStr for KPermutation {
    type Err = Error;

    /// Parses `"k=2 N=2 : {1,4}|{2,3}"`.
    fn from_str(s: &str) -> Result<Self> {
        let (header, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing ':' separator".into()))?;
        let v = parse_header(header, &["k", "N"])?;
        let params = ShuffleParams::new(v[0], v[1])?;
        let blocks = body
            .trim()
            .split('|')
            .map(|b| {
                let inner = b
                    .trim()
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| Error::Parse(format!("malformed packet {b:?}")))?;
                inner
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<u16>()
                            .map_err(|e| Error::Parse(format!("card {c:?}: {e}")))
                    })
                    .collect::<Result<Vec<u16>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        KPermutation::from_blocks(params, &blocks)
    }
}

/// A permutation of `{1, ..., n}` in one-line notation: `image[p - 1] = pi(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<u16>,
}

impl Permutation {
    pub fn new(image: Vec<u16>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &v in &image {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(Error::Validation(format!(
                    "{image:?} is not a bijection of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n as u16).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles, e.g. `[[1, 2], [3, 4]]`.
    pub fn from_cycles(n: usize, cycles: &[&[u16]]) -> Result<Self> {
        let mut image: Vec<u16> = (1..=n as u16).collect();
        for cycle in cycles {
            for (idx, &from) in cycle.iter().enumerate() {
                let to = cycle[(idx + 1) % cycle.len()];
                if from == 0 || from as usize > n {
                    return Err(Error::Validation(format!(
                        "cycle entry {from} outside 1..={n}"
                    )));
                }
                image[from as usize - 1] = to;
            }
        }
        Permutation::new(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn one_line(&self) -> &[u16] {
        &self.image
    }

    pub fn apply(&self, p: u16) -> u16 {
        self.image[p as usize - 1]
    }

    /// `self ∘ other`, i.e. `p ↦ self(other(p))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different sizes"
        );
        Permutation {
            image: other.image.iter().map(|&p| self.apply(p)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.image.len()];
        for (p, &v) in self.image.iter().enumerate() {
            inv[v as usize - 1] = (p + 1) as u16;
        }
        Permutation { image: inv }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_text_form() {
        let c: Configuration = "k=2 N=3 m=2 : 1 1 0".parse().unwrap();
        assert_eq!(c.gamma(), &[1, 1, 0]);
        assert_eq!(c.to_string(), "k=2 N=3 m=2 : 1 1 0");
        assert!("k=2 N=3 m=3 : 1 1 0".parse::<Configuration>().is_err());
        assert!("k=2 N=3 m=3 : 3 0 0".parse::<Configuration>().is_err());
        assert!("k=2 N=3 1 1 0".parse::<Configuration>().is_err());
    }

    #[test]
    fn kpermutation_text_form() {
        let s: KPermutation = "k=2 N=2 : {1,4}|{2,3}".parse().unwrap();
        assert_eq!(s.packet(1), &[1, 4]);
        assert_eq!(s.packet(2), &[2, 3]);
        assert_eq!(s.to_string(), "k=2 N=2 : {1,4}|{2,3}");
        // unsorted input is normalised
        let t: KPermutation = "k=2 N=2 : {4,1}|{3,2}".parse().unwrap();
        assert_eq!(s, t);
        assert!("k=2 N=2 : {1,1}|{2,3}".parse::<KPermutation>().is_err());
        assert!("k=2 N=2 : {1,4,2}|{3}".parse::<KPermutation>().is_err());
    }

    #[test]
    fn swap_resorts_packets() {
        let p = ShuffleParams::new(3, 2).unwrap();
        let s = KPermutation::from_blocks(p, &[vec![1, 4, 6], vec![2, 3, 5]]).unwrap();
        // 3rd smallest of packet 1 (6) with 1st smallest of packet 2 (2)
        let t = s.swapped(1, 3, 1);
        assert_eq!(t.packet(1), &[1, 2, 4]);
        assert_eq!(t.packet(2), &[3, 5, 6]);
    }

    #[test]
    fn top_and_bottom() {
        let p = ShuffleParams::new(2, 3).unwrap();
        assert_eq!(KPermutation::top(p).cards(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(KPermutation::bottom(p).cards(), &[5, 6, 3, 4, 1, 2]);
    }

    #[test]
    fn permutation_algebra() {
        let rho = Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(rho.one_line(), &[2, 1, 4, 3]);
        assert_eq!(rho.compose(&rho), Permutation::identity(4));
        let pi = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(pi.compose(&pi.inverse()), Permutation::identity(3));
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
    }
}
