//! Coarse projections of a k-permutation (semi-skeleton and skeleton), the
//! collapse map from ordinary permutations, and the action of `S_{kN}` on
//! k-permutations used to average over semi-skeleton fibers.

use crate::chain::height::height_of_kpermutation;
use crate::chain::params::ShuffleParams;
use crate::chain::state::{KPermutation, Permutation};
use crate::error::{Error, Result};

/// Cut points `x_j = ceil(jN/R)` and `y_j = k ceil(jN/R)` for `j = 0..=R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cuts {
    r: usize,
    xs: Vec<usize>,
    ys: Vec<usize>,
}

impl Cuts {
    pub fn new(params: ShuffleParams, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParams("R must be positive".into()));
        }
        let n = params.n();
        let xs: Vec<usize> = (0..=r).map(|j| (j * n).div_ceil(r)).collect();
        let ys = xs.iter().map(|&x| params.k() * x).collect();
        Ok(Cuts { r, xs, ys })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn xs(&self) -> &[usize] {
        &self.xs
    }

    pub fn ys(&self) -> &[usize] {
        &self.ys
    }

    /// Card ranges `{y_{i-1}+1, ..., y_i}` for `i = 1..=R` (possibly empty).
    pub fn card_ranges(&self) -> Vec<std::ops::RangeInclusive<usize>> {
        self.ys.windows(2).map(|w| (w[0] + 1)..=w[1]).collect()
    }

    /// Interior packet cuts `x_1, ..., x_{R-1}` that fall strictly inside
    /// `1..N`, deduplicated. These are the bonds censored by block dynamics.
    pub fn interior_bonds(&self, n: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.xs[1..self.r]
            .iter()
            .copied()
            .filter(|&x| x >= 1 && x < n)
            .collect();
        out.dedup();
        out
    }
}

/// Semi-skeleton and skeleton of a k-permutation, stored as `N *` height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonData {
    pub cuts: Cuts,
    /// `(N+1) x (R+1)`, row-major in `x`: `N * sigma~(x, y_j)`.
    pub semi: Vec<i64>,
    /// `(R+1) x (R+1)`, row-major in `i`: `N * sigma~(x_i, y_j)`.
    pub skel: Vec<i64>,
}

impl SkeletonData {
    pub fn new(sigma: &KPermutation, r: usize) -> Result<Self> {
        let cuts = Cuts::new(sigma.params(), r)?;
        Ok(Self::with_cuts(sigma, cuts))
    }

    pub fn with_cuts(sigma: &KPermutation, cuts: Cuts) -> Self {
        let n = sigma.params().n();
        let h = height_of_kpermutation(sigma);
        let mut semi = Vec::with_capacity((n + 1) * (cuts.r + 1));
        for x in 0..=n {
            for &y in &cuts.ys {
                semi.push(h.scaled(x, y));
            }
        }
        let mut skel = Vec::with_capacity((cuts.r + 1) * (cuts.r + 1));
        for &x in &cuts.xs {
            for &y in &cuts.ys {
                skel.push(h.scaled(x, y));
            }
        }
        SkeletonData { cuts, semi, skel }
    }

    pub fn semi_at(&self, x: usize, j: usize) -> i64 {
        self.semi[x * (self.cuts.r + 1) + j]
    }

    pub fn skel_at(&self, i: usize, j: usize) -> i64 {
        self.skel[i * (self.cuts.r + 1) + j]
    }
}

/// Semi-skeleton alone, as a hashable key.
pub fn semi_skeleton(sigma: &KPermutation, cuts: &Cuts) -> Vec<i64> {
    // counts of each card range per packet carry the same information as
    // the semi-skeleton and are cheaper than a full height function
    let ranges = cuts.card_ranges();
    let n = sigma.params().n();
    let mut out = vec![0i64; n * ranges.len()];
    for x in 1..=n {
        for &c in sigma.packet(x) {
            let c = c as usize;
            let idx = ranges
                .iter()
                .position(|r| r.contains(&c))
                .expect("card in a range");
            out[(x - 1) * ranges.len() + idx] += 1;
        }
    }
    out
}

/// Skeleton alone, as a hashable key.
pub fn skeleton(sigma: &KPermutation, cuts: &Cuts) -> Vec<i64> {
    SkeletonData::with_cuts(sigma, cuts.clone()).skel
}

/// `θ(π)(x) = {π((x-1)k+1), ..., π(xk)}`.
pub fn collapse_theta(pi: &Permutation, k: usize) -> Result<KPermutation> {
    if k == 0 || !pi.len().is_multiple_of(k) {
        return Err(Error::Validation(format!(
            "permutation of size {} cannot be cut into packets of {k}",
            pi.len()
        )));
    }
    let params = ShuffleParams::new(k, pi.len() / k)?;
    KPermutation::from_flat(params, pi.one_line().to_vec())
}

/// The preimage of `ω` under `θ` that is maximal in the height order: each
/// packet listed increasingly, packets in order.
pub fn most_ordered_preimage(omega: &KPermutation) -> Permutation {
    Permutation::new(omega.cards().to_vec()).expect("packets partition the deck")
}

/// `ρ · ω = θ(ρ ∘ σ_ω)`.
pub fn act(rho: &Permutation, omega: &KPermutation) -> Result<KPermutation> {
    if rho.len() != omega.params().cards() {
        return Err(Error::DimensionMismatch {
            expected: omega.params().cards(),
            got: rho.len(),
        });
    }
    collapse_theta(
        &rho.compose(&most_ordered_preimage(omega)),
        omega.params().k(),
    )
}

fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, v| acc.saturating_mul(v))
}

/// `|S~| = prod_i (Δy_i)!`.
pub fn block_group_order(cuts: &Cuts) -> u128 {
    cuts.card_ranges()
        .iter()
        .map(|r| factorial_u128(r.clone().count()))
        .fold(1u128, |acc, v| acc.saturating_mul(v))
}

/// Rearranges `v` into the next permutation in lexicographic order; returns
/// `false` (and leaves `v` sorted) after the last one.
pub(crate) fn next_permutation(v: &mut [u16]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `f` on every element of `S~`, the subgroup of `S_{kN}` fixing each
/// card range `{y_{i-1}+1, ..., y_i}` setwise.
pub fn for_each_block_preserving(
    params: ShuffleParams,
    cuts: &Cuts,
    cap: u128,
    mut f: impl FnMut(&Permutation),
) -> Result<()> {
    let order = block_group_order(cuts);
    if order > cap {
        return Err(Error::BudgetExceeded {
            what: "block-preserving permutations",
            needed: order,
            cap,
        });
    }
    let ranges = cuts.card_ranges();
    let mut image: Vec<u16> = (1..=params.cards() as u16).collect();
    loop {
        f(&Permutation::new(image.clone()).expect("valid permutation"));
        // odometer: advance the first range that has a next permutation;
        // ranges that wrap are reset to sorted by next_permutation itself
        let mut advanced = false;
        for r in &ranges {
            if r.is_empty() {
                continue;
            }
            let slice = &mut image[*r.start() - 1..*r.end()];
            if next_permutation(slice) {
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Ok(());
        }
    }
}

/// Brute-force count of `ρ ∈ S~` with `ρ · ω = ω'`.
pub fn count_action_matches(
    omega: &KPermutation,
    omega_prime: &KPermutation,
    r: usize,
    cap: u128,
) -> Result<u64> {
    if omega.params() != omega_prime.params() {
        return Err(Error::ParamsMismatch(format!(
            "{:?} vs {:?}",
            omega.params(),
            omega_prime.params()
        )));
    }
    let cuts = Cuts::new(omega.params(), r)?;
    let sigma_omega = most_ordered_preimage(omega);
    let k = omega.params().k();
    let mut count = 0u64;
    for_each_block_preserving(omega.params(), &cuts, cap, |rho| {
        let image = collapse_theta(&rho.compose(&sigma_omega), k).expect("valid collapse");
        if &image == omega_prime {
            count += 1;
        }
    })?;
    Ok(count)
}

/// `|S~ ∩ σ_ω G σ_ω^{-1}|` in closed form: the conjugated packet group fixes
/// each set `ω(x)`, so the intersection fixes each `ω(x) ∩ range_i` and has
/// order `prod_{x,i} |ω(x) ∩ range_i|!`.
pub fn stabilizer_intersection_order(omega: &KPermutation, r: usize) -> Result<u128> {
    let cuts = Cuts::new(omega.params(), r)?;
    let key = semi_skeleton(omega, &cuts);
    Ok(key
        .iter()
        .map(|&c| factorial_u128(c as usize))
        .fold(1u128, |acc, v| acc.saturating_mul(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::enumerate::{enumerate_kpermutations, DEFAULT_STATE_CAP};
    use crate::chain::height::compare_kpermutations;

    fn sp(k: usize, n: usize) -> ShuffleParams {
        ShuffleParams::new(k, n).unwrap()
    }

    #[test]
    fn cut_points() {
        let c = Cuts::new(sp(2, 8), 2).unwrap();
        assert_eq!(c.xs(), &[0, 4, 8]);
        assert_eq!(c.ys(), &[0, 8, 16]);
        assert_eq!(c.interior_bonds(8), vec![4]);
        let c = Cuts::new(sp(3, 5), 3).unwrap();
        assert_eq!(c.xs(), &[0, 2, 4, 5]);
        assert_eq!(c.ys(), &[0, 6, 12, 15]);
        let c = Cuts::new(sp(1, 4), 1).unwrap();
        assert!(c.interior_bonds(4).is_empty());
    }

    #[test]
    fn collapse_examples() {
        let id = Permutation::identity(4);
        let top = collapse_theta(&id, 2).unwrap();
        assert_eq!(top, KPermutation::top(sp(2, 2)));
        let pi = Permutation::new(vec![1, 3, 2, 4]).unwrap();
        let s = collapse_theta(&pi, 2).unwrap();
        assert_eq!(s.packet(1), &[1, 3]);
        assert_eq!(s.packet(2), &[2, 4]);
        assert!(collapse_theta(&Permutation::identity(5), 2).is_err());
    }

    #[test]
    fn fiber_of_top_collapses() {
        // all (k!)^N = 4 within-packet reorderings of the identity
        for image in [[1u16, 2, 3, 4], [2, 1, 3, 4], [1, 2, 4, 3], [2, 1, 4, 3]] {
            let pi = Permutation::new(image.to_vec()).unwrap();
            assert_eq!(collapse_theta(&pi, 2).unwrap(), KPermutation::top(sp(2, 2)));
        }
    }

    #[test]
    fn preimage_dominates_its_fiber() {
        // as 1-permutations (k = 1, N = kN), sigma_omega is maximal among
        // all within-packet reorderings
        let p = sp(2, 3);
        for omega in enumerate_kpermutations(p, DEFAULT_STATE_CAP).unwrap() {
            let best = most_ordered_preimage(&omega);
            let one = ShuffleParams::new(1, 6).unwrap();
            let best1 = KPermutation::from_flat(one, best.one_line().to_vec()).unwrap();
            let img = omega.cards().to_vec();
            let mut fiber = Vec::new();
            // enumerate products of within-packet permutations
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        let mut v = img.clone();
                        for (flip, slot) in [(a, 0), (b, 2), (c, 4)] {
                            if flip == 1 {
                                v.swap(slot, slot + 1);
                            }
                        }
                        fiber.push(v);
                    }
                }
            }
            for v in fiber {
                let other = KPermutation::from_flat(one, v.clone()).unwrap();
                assert!(compare_kpermutations(&best1, &other).unwrap().is_geq());
                let pi = Permutation::new(v).unwrap();
                assert_eq!(collapse_theta(&pi, 2).unwrap(), omega);
            }
        }
    }

    #[test]
    fn figure_action_example() {
        let p = sp(2, 3);
        let omega = KPermutation::from_blocks(p, &[vec![3, 5], vec![2, 6], vec![1, 4]]).unwrap();
        let rho = Permutation::from_cycles(6, &[&[1, 2], &[3, 4]]).unwrap();
        let out = act(&rho, &omega).unwrap();
        // relabel each card through rho
        assert_eq!(out.packet(1), &[4, 5]);
        assert_eq!(out.packet(2), &[1, 6]);
        assert_eq!(out.packet(3), &[2, 3]);
        // same semi-skeleton for R = 3 (cuts 2, 4, 6)
        let cuts = Cuts::new(p, 3).unwrap();
        assert_eq!(semi_skeleton(&out, &cuts), semi_skeleton(&omega, &cuts));
        assert_eq!(act(&Permutation::identity(6), &omega).unwrap(), omega);
    }

    #[test]
    fn semi_skeleton_key_matches_heights() {
        let p = sp(2, 3);
        let cuts = Cuts::new(p, 2).unwrap();
        let all = enumerate_kpermutations(p, DEFAULT_STATE_CAP).unwrap();
        for a in &all {
            for b in &all {
                let same_key = semi_skeleton(a, &cuts) == semi_skeleton(b, &cuts);
                let same_semi = SkeletonData::with_cuts(a, cuts.clone()).semi
                    == SkeletonData::with_cuts(b, cuts.clone()).semi;
                assert_eq!(same_key, same_semi);
            }
        }
    }

    #[test]
    fn counting_on_two_packets() {
        let p = sp(1, 2);
        let all = enumerate_kpermutations(p, DEFAULT_STATE_CAP).unwrap();
        for w in &all {
            for w2 in &all {
                assert_eq!(count_action_matches(w, w2, 1, 1000).unwrap(), 1);
            }
        }
        let p = sp(2, 2);
        let all = enumerate_kpermutations(p, DEFAULT_STATE_CAP).unwrap();
        let cuts = Cuts::new(p, 2).unwrap();
        for w in &all {
            for w2 in &all {
                let c = count_action_matches(w, w2, 2, 1000).unwrap();
                if semi_skeleton(w, &cuts) != semi_skeleton(w2, &cuts) {
                    assert_eq!(c, 0);
                } else {
                    assert_eq!(c as u128, stabilizer_intersection_order(w, 2).unwrap());
                }
            }
            assert!(count_action_matches(w, w, 2, 1000).unwrap() >= 1);
        }
    }

    #[test]
    fn group_enumeration_size() {
        let p = sp(2, 3);
        let cuts = Cuts::new(p, 3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for_each_block_preserving(p, &cuts, 1000, |rho| {
            seen.insert(rho.clone());
        })
        .unwrap();
        assert_eq!(seen.len() as u128, block_group_order(&cuts));
        assert_eq!(seen.len(), 8);
        let cuts = Cuts::new(p, 1).unwrap();
        assert!(for_each_block_preserving(p, &cuts, 100, |_| {}).is_err());
    }
}
