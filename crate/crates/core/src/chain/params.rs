use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest deck size representable by 16-bit card ids.
pub const MAX_CARDS: usize = u16::MAX as usize;

/// Parameters of the capacity-k exclusion process: site capacity `k`,
/// number of sites `n` and particle count `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    k: usize,
    n: usize,
    m: usize,
}

impl Params {
    pub fn new(k: usize, n: usize, m: usize) -> Result<Self> {
        ShuffleParams::new(k, n)?;
        if k > u8::MAX as usize {
            return Err(Error::InvalidParams(format!(
                "site capacity k = {k} does not fit a byte"
            )));
        }
        if m > k * n {
            return Err(Error::EmptySpace(format!(
                "m = {m} exceeds capacity k*N = {}",
                k * n
            )));
        }
        Ok(Params { k, n, m })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Total number of slots `kN`.
    pub fn capacity(&self) -> usize {
        self.k * self.n
    }

    pub fn shuffle(&self) -> ShuffleParams {
        ShuffleParams {
            k: self.k,
            n: self.n,
        }
    }
}

/// Parameters of the packet shuffle: `n` packets of `k` cards each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShuffleParams {
    k: usize,
    n: usize,
}

impl ShuffleParams {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if n < 2 {
            return Err(Error::InvalidParams("N must be at least 2".into()));
        }
        if k * n > MAX_CARDS {
            return Err(Error::InvalidParams(format!(
                "k*N = {} exceeds the {MAX_CARDS} card limit",
                k * n
            )));
        }
        Ok(ShuffleParams { k, n })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cards(&self) -> usize {
        self.k * self.n
    }

    pub fn with_m(&self, m: usize) -> Result<Params> {
        Params::new(self.k, self.n, m)
    }

    /// Number of update labels `(x, i, j)` with `x` in `[N-1]` and `i, j` in `[k]`.
    pub fn label_count(&self) -> usize {
        (self.n - 1) * self.k * self.k
    }
}
