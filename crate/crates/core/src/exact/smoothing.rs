//! Smoothing a measure over semi-skeleton fibers, skeleton push-forwards and
//! the hypergeometric skeleton marginals of the uniform measure.

use std::collections::HashMap;

use crate::chain::{
    act, for_each_block_preserving, semi_skeleton, skeleton, Cuts, KPermutation, ShuffleParams,
    ShuffleSpace,
};
use crate::error::{out_of_range, Error, Result};

/// Partition of an enumerated shuffle space by a key function.
#[derive(Debug, Clone)]
pub struct FiberIndex {
    keys: Vec<Vec<i64>>,
    fiber_of: Vec<usize>,
    sizes: Vec<usize>,
}

impl FiberIndex {
    pub fn build(space: &ShuffleSpace, key: impl Fn(&KPermutation) -> Vec<i64>) -> Self {
        let mut lookup: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut keys = Vec::new();
        let mut sizes = Vec::new();
        let fiber_of = space
            .states()
            .iter()
            .map(|s| {
                let k = key(s);
                let id = *lookup.entry(k.clone()).or_insert_with(|| {
                    keys.push(k);
                    sizes.push(0);
                    keys.len() - 1
                });
                sizes[id] += 1;
                id
            })
            .collect();
        FiberIndex {
            keys,
            fiber_of,
            sizes,
        }
    }

    pub fn semi_skeleton(space: &ShuffleSpace, cuts: &Cuts) -> Self {
        Self::build(space, |s| semi_skeleton(s, cuts))
    }

    pub fn skeleton(space: &ShuffleSpace, cuts: &Cuts) -> Self {
        Self::build(space, |s| skeleton(s, cuts))
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[Vec<i64>] {
        &self.keys
    }

    pub fn fiber_of(&self, state: usize) -> usize {
        self.fiber_of[state]
    }

    pub fn size(&self, fiber: usize) -> usize {
        self.sizes[fiber]
    }

    /// Push-forward of `nu` onto fibers.
    pub fn push_forward(&self, nu: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.keys.len()];
        for (i, &v) in nu.iter().enumerate() {
            out[self.fiber_of[i]] += v;
        }
        out
    }

    /// `nu` averaged uniformly within each fiber.
    pub fn average(&self, nu: &[f64]) -> Vec<f64> {
        let pushed = self.push_forward(nu);
        self.fiber_of
            .iter()
            .map(|&f| pushed[f] / self.sizes[f] as f64)
            .collect()
    }
}

/// Smoothed measure and its coarse projections.
#[derive(Debug, Clone)]
pub struct Smoothed {
    /// `ν̃`, the semi-skeleton-fiber average of `ν`.
    pub nu_tilde: Vec<f64>,
    /// Semi-skeleton push-forwards of `ν` and of the uniform measure.
    pub nu_hat: Vec<f64>,
    pub mu_hat: Vec<f64>,
    /// Skeleton push-forwards of `ν` and of the uniform measure.
    pub nu_bar: Vec<f64>,
    pub mu_bar: Vec<f64>,
    pub semi: FiberIndex,
    pub skel: FiberIndex,
}

pub fn smooth_and_project(space: &ShuffleSpace, nu: &[f64], r: usize) -> Result<Smoothed> {
    if nu.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            got: nu.len(),
        });
    }
    let params = space.state(0).params();
    let cuts = Cuts::new(params, r)?;
    let semi = FiberIndex::semi_skeleton(space, &cuts);
    let skel = FiberIndex::skeleton(space, &cuts);
    let uniform = vec![1.0 / space.len() as f64; space.len()];
    Ok(Smoothed {
        nu_tilde: semi.average(nu),
        nu_hat: semi.push_forward(nu),
        mu_hat: semi.push_forward(&uniform),
        nu_bar: skel.push_forward(nu),
        mu_bar: skel.push_forward(&uniform),
        semi,
        skel,
    })
}

/// `ν̃(ω) = |S̃|^{-1} Σ_{ρ ∈ S̃} ν(ρ·ω)` by summing over the block-preserving
/// group directly.
pub fn group_average(space: &ShuffleSpace, nu: &[f64], r: usize, cap: u128) -> Result<Vec<f64>> {
    if nu.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            got: nu.len(),
        });
    }
    let params = space.state(0).params();
    let cuts = Cuts::new(params, r)?;
    let mut group = Vec::new();
    for_each_block_preserving(params, &cuts, cap, |rho| group.push(rho.clone()))?;
    let size = group.len() as f64;
    space
        .states()
        .iter()
        .map(|omega| {
            let mut acc = 0.0;
            for rho in &group {
                let image = act(rho, omega)?;
                acc += nu[space.index_of(&image).expect("action stays in the space")];
            }
            Ok(acc / size)
        })
        .collect()
}

/// Law of the skeleton entry at `(i, j)` under the uniform measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonMarginal {
    /// Number of cards `≤ y_j` among the first `x_i` packets.
    pub counts: Vec<usize>,
    /// `N * σ̄(i, j) = N ℓ − x_i y_j` for each count `ℓ`.
    pub scaled_values: Vec<i64>,
    pub probabilities: Vec<f64>,
}

/// Hypergeometric: `P(ℓ) = C(y_j, ℓ) C(kN − y_j, k x_i − ℓ) / C(kN, k x_i)`.
pub fn skeleton_marginal(
    params: ShuffleParams,
    r: usize,
    i: usize,
    j: usize,
) -> Result<SkeletonMarginal> {
    let cuts = Cuts::new(params, r)?;
    if i > r || j > r {
        return Err(out_of_range(
            "skeleton index",
            format!("({i}, {j}) with R = {r}"),
        ));
    }
    let total = params.cards();
    let drawn = params.k() * cuts.xs()[i];
    let marked = cuts.ys()[j];
    let lo = drawn.saturating_sub(total - marked);
    let hi = drawn.min(marked);
    let log_denominator = ln_binomial(total, drawn);
    let mut counts = Vec::new();
    let mut scaled_values = Vec::new();
    let mut probabilities = Vec::new();
    for l in lo..=hi {
        counts.push(l);
        scaled_values.push((params.n() * l) as i64 - (cuts.xs()[i] * marked) as i64);
        let lp = ln_binomial(marked, l) + ln_binomial(total - marked, drawn - l) - log_denominator;
        probabilities.push(lp.exp());
    }
    Ok(SkeletonMarginal {
        counts,
        scaled_values,
        probabilities,
    })
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}
