//! Positive-correlation checks and increasing functions built from height
//! coordinates.

use rand::Rng;

use crate::chain::{compare_pointwise, height_of_kpermutation, ShuffleParams, ShuffleSpace};
use crate::error::{Error, Result};

/// `(μ(fg), μ(f) μ(g))`.
pub fn fkg_check(mu: &[f64], f: &[f64], g: &[f64]) -> Result<(f64, f64)> {
    if f.len() != mu.len() || g.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            got: f.len().max(g.len()),
        });
    }
    let mean = |h: &[f64]| mu.iter().zip(h).map(|(p, v)| p * v).sum::<f64>();
    let fg: Vec<f64> = f.iter().zip(g).map(|(a, b)| a * b).collect();
    Ok((mean(&fg), mean(f) * mean(g)))
}

/// Scaled height coordinates `N σ̃(x, y)` of every state, indexed
/// `[state][x * (kN + 1) + y]`.
pub fn height_table(space: &ShuffleSpace) -> Vec<Vec<i64>> {
    space
        .states()
        .iter()
        .map(|s| height_of_kpermutation(s).scaled_values().to_vec())
        .collect()
}

/// `geq[a][b]` iff state `a` dominates state `b` pointwise.
pub fn order_matrix(heights: &[Vec<i64>]) -> Vec<Vec<bool>> {
    heights
        .iter()
        .map(|a| {
            heights
                .iter()
                .map(|b| compare_pointwise(a, b).is_geq())
                .collect()
        })
        .collect()
}

/// Whether `f` is nondecreasing along the order.
pub fn is_increasing(geq: &[Vec<bool>], f: &[f64]) -> bool {
    (0..f.len()).all(|a| (0..f.len()).all(|b| !geq[a][b] || f[a] >= f[b]))
}

/// Building blocks for increasing functions of a k-permutation, each a
/// nondecreasing function of the height coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum IncreasingFn {
    /// `σ̃(x, y)`.
    Coordinate {
        x: usize,
        y: usize,
    },
    /// `1{N σ̃(x, y) ≥ threshold}`.
    Indicator {
        x: usize,
        y: usize,
        threshold: i64,
    },
    /// Nonnegative combination.
    Sum(Vec<(f64, IncreasingFn)>),
    Max(Vec<IncreasingFn>),
    Min(Vec<IncreasingFn>),
}

impl IncreasingFn {
    /// Value on a state whose scaled heights are `h` (width `kN + 1`, side `N`).
    pub fn eval(&self, h: &[i64], width: usize, n: usize) -> f64 {
        match self {
            IncreasingFn::Coordinate { x, y } => h[x * width + y] as f64 / n as f64,
            IncreasingFn::Indicator { x, y, threshold } => {
                if h[x * width + y] >= *threshold {
                    1.0
                } else {
                    0.0
                }
            }
            IncreasingFn::Sum(terms) => terms.iter().map(|(c, f)| c * f.eval(h, width, n)).sum(),
            IncreasingFn::Max(fs) => fs
                .iter()
                .map(|f| f.eval(h, width, n))
                .fold(f64::NEG_INFINITY, f64::max),
            IncreasingFn::Min(fs) => fs
                .iter()
                .map(|f| f.eval(h, width, n))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Values over every state of `space`.
    pub fn tabulate(&self, space: &ShuffleSpace, heights: &[Vec<i64>]) -> Vec<f64> {
        let p = space.state(0).params();
        heights
            .iter()
            .map(|h| self.eval(h, p.cards() + 1, p.n()))
            .collect()
    }

    /// Whether every `Sum` coefficient is nonnegative, so the function is
    /// increasing by construction.
    pub fn is_monotone_by_construction(&self) -> bool {
        match self {
            IncreasingFn::Coordinate { .. } | IncreasingFn::Indicator { .. } => true,
            IncreasingFn::Sum(terms) => terms
                .iter()
                .all(|(c, f)| *c >= 0.0 && f.is_monotone_by_construction()),
            IncreasingFn::Max(fs) | IncreasingFn::Min(fs) => {
                fs.iter().all(IncreasingFn::is_monotone_by_construction)
            }
        }
    }
}

/// A random increasing function of depth at most `depth`: leaves are height
/// coordinates or threshold indicators at interior points, inner nodes are
/// positive sums, maxima or minima.
pub fn random_increasing_fn<R: Rng + ?Sized>(
    rng: &mut R,
    params: ShuffleParams,
    depth: usize,
) -> IncreasingFn {
    let leaf = |rng: &mut R| {
        let x = rng.random_range(1..params.n());
        let y = rng.random_range(1..params.cards());
        if rng.random_bool(0.5) {
            IncreasingFn::Coordinate { x, y }
        } else {
            // N σ̃(x, y) ranges over [−xy, N min(kx, y) − xy]
            let lo = -((x * y) as i64);
            let hi = (params.n() * (params.k() * x).min(y)) as i64 + lo;
            IncreasingFn::Indicator {
                x,
                y,
                threshold: rng.random_range(lo..=hi),
            }
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let parts: Vec<IncreasingFn> = (0..rng.random_range(2..=3))
        .map(|_| random_increasing_fn(rng, params, depth - 1))
        .collect();
    match rng.random_range(0..4) {
        0 => IncreasingFn::Sum(
            parts
                .into_iter()
                .map(|f| (rng.random_range(0.1..2.0), f))
                .collect(),
        ),
        1 => IncreasingFn::Max(parts),
        2 => IncreasingFn::Min(parts),
        _ => leaf(rng),
    }
}
