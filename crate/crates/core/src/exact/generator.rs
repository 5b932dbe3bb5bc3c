//! Sparse continuous-time generators over enumerated state spaces.

use nalgebra::DMatrix;

use crate::chain::{Configuration, SepSpace, ShuffleSpace};
use crate::error::{Error, Result};
use crate::exact::censor::UpdateMask;

/// Off-diagonal rates in CSR layout plus an explicit diagonal equal to minus
/// the row sum.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    rates: Vec<f64>,
    diag: Vec<f64>,
}

impl RateMatrix {
    /// Builds from per-row `(target, rate)` lists. Duplicate targets are
    /// summed; self-loops and zero rates are dropped.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut rates = Vec::new();
        let mut diag = Vec::with_capacity(dim);
        row_ptr.push(0);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|&(j, _)| j);
            let mut total = 0.0;
            let start = cols.len();
            for (j, r) in row {
                if j >= dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: j + 1,
                    });
                }
                if !r.is_finite() || r < 0.0 {
                    return Err(Error::Validation(format!("rate {r} from {i} to {j}")));
                }
                if j == i || r == 0.0 {
                    continue;
                }
                total += r;
                if cols.len() > start && *cols.last().unwrap() == j {
                    *rates.last_mut().unwrap() += r;
                } else {
                    cols.push(j);
                    rates.push(r);
                }
            }
            diag.push(-total);
            row_ptr.push(cols.len());
        }
        Ok(RateMatrix {
            dim,
            row_ptr,
            cols,
            rates,
            diag,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// Off-diagonal entries of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.rates[span].iter().copied())
    }

    /// All rows as `(target, rate)` lists; the inverse of [`Self::from_rows`].
    pub fn to_rows(&self) -> Vec<Vec<(usize, f64)>> {
        (0..self.dim).map(|i| self.row(i).collect()).collect()
    }

    pub fn rate(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[span.clone()].binary_search(&j) {
            Ok(pos) => self.rates[span.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn exit_rate(&self, i: usize) -> f64 {
        -self.diag[i]
    }

    pub fn max_exit_rate(&self) -> f64 {
        self.diag.iter().fold(0.0, |acc: f64, &d| acc.max(-d))
    }

    /// Row vector times generator, `(ν Q)(j) = Σ_i ν(i) Q(i, j)`.
    pub fn apply_left(&self, nu: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = nu.iter().zip(&self.diag).map(|(v, d)| v * d).collect();
        for (i, &v) in nu.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for (j, r) in self.row(i) {
                out[j] += v * r;
            }
        }
        out
    }

    /// Generator times column vector, `(Q f)(i) = Σ_j Q(i, j) f(j)`.
    pub fn apply_right(&self, f: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).map(|(j, r)| r * f[j]).sum::<f64>() + self.diag[i] * f[i])
            .collect()
    }

    /// Largest absolute row sum (zero for a valid generator up to rounding).
    pub fn max_row_sum(&self) -> f64 {
        (0..self.dim)
            .map(|i| (self.row(i).map(|(_, r)| r).sum::<f64>() + self.diag[i]).abs())
            .fold(0.0, f64::max)
    }

    /// `max_{i,j} |μ(i) Q(i,j) - μ(j) Q(j,i)|`.
    pub fn detailed_balance_defect(&self, mu: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for (j, r) in self.row(i) {
                worst = worst.max((mu[i] * r - mu[j] * self.rate(j, i)).abs());
            }
        }
        worst
    }

    /// `‖μ Q‖_∞`.
    pub fn stationarity_defect(&self, mu: &[f64]) -> f64 {
        self.apply_left(mu)
            .iter()
            .fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            m[(i, i)] = self.diag[i];
            for (j, r) in self.row(i) {
                m[(i, j)] = r;
            }
        }
        m
    }
}

fn sep_transitions(gamma: &Configuration) -> Vec<(Vec<u8>, f64)> {
    let k = gamma.params().k() as i64;
    let g = gamma.gamma();
    let mut out = Vec::new();
    for x in 0..g.len() - 1 {
        let (a, b) = (g[x] as i64, g[x + 1] as i64);
        // right move x -> x+1 at rate gamma(x)(k - gamma(x+1))
        let p = a * (k - b);
        if p > 0 {
            let mut next = g.to_vec();
            next[x] -= 1;
            next[x + 1] += 1;
            out.push((next, p as f64));
        }
        // left move x+1 -> x at rate gamma(x+1)(k - gamma(x))
        let q = b * (k - a);
        if q > 0 {
            let mut next = g.to_vec();
            next[x] += 1;
            next[x + 1] -= 1;
            out.push((next, q as f64));
        }
    }
    out
}

/// Generator of the capacity-k exclusion process on an enumerated space.
pub fn build_sep_generator(space: &SepSpace) -> RateMatrix {
    let rows = space
        .states()
        .iter()
        .map(|gamma| {
            sep_transitions(gamma)
                .into_iter()
                .map(|(next, rate)| {
                    let next = Configuration::new(gamma.params(), next).expect("valid move");
                    (space.index_of(&next).expect("enumerated target"), rate)
                })
                .collect()
        })
        .collect();
    RateMatrix::from_rows(rows).expect("well-formed SEP rates")
}

/// Generator of the packet shuffle, each `τ_x^{i,j}` at rate 1.
pub fn build_shuffle_generator(space: &ShuffleSpace) -> RateMatrix {
    build_masked_shuffle_generator(space, None)
}

/// Shuffle generator keeping only the updates allowed by `mask`.
pub fn build_censored_shuffle_generator(space: &ShuffleSpace, mask: &UpdateMask) -> RateMatrix {
    build_masked_shuffle_generator(space, Some(mask))
}

fn build_masked_shuffle_generator(space: &ShuffleSpace, mask: Option<&UpdateMask>) -> RateMatrix {
    let rows = space
        .states()
        .iter()
        .map(|sigma| {
            let p = sigma.params();
            let mut row = Vec::with_capacity(p.label_count());
            for x in 1..p.n() {
                for i in 1..=p.k() {
                    for j in 1..=p.k() {
                        if mask.is_some_and(|m| !m.allows(x, i, j)) {
                            continue;
                        }
                        let next = sigma.swapped(x, i, j);
                        row.push((space.index_of(&next).expect("enumerated target"), 1.0));
                    }
                }
            }
            row
        })
        .collect();
    RateMatrix::from_rows(rows).expect("well-formed shuffle rates")
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `μ(γ) ∝ Π_x binom(k, γ(x))`, normalised by direct summation.
pub fn stationary_sep_measure(space: &SepSpace) -> Vec<f64> {
    let weights: Vec<f64> = space
        .states()
        .iter()
        .map(|g| {
            let k = g.params().k();
            g.gamma()
                .iter()
                .map(|&v| binomial_f64(k, v as usize))
                .product()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// The normalising constant `binom(Nk, m)` of the stationary measure.
pub fn stationary_normaliser(params: crate::chain::Params) -> f64 {
    binomial_f64(params.capacity(), params.m())
}

pub fn uniform_measure(dim: usize) -> Vec<f64> {
    vec![1.0 / dim as f64; dim]
}
