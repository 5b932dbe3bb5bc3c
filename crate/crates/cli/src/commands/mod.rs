//! One module per subcommand. Each returns a [`Report`] after writing its
//! CSVs, plot script and manifest.

use std::time::Instant;

use exclusion_core::exact::{distance_from, worst_case_distance, RateMatrix, ReversibleKernel};
use exclusion_core::Params;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub mod area;
pub mod censor;
pub mod cutoff;
pub mod eigen;
pub mod fkg;
pub mod heat;
pub mod tv;

/// Largest space handled with a dense eigendecomposition; bigger enumerable
/// spaces fall back to uniformization.
pub const DENSE_STATE_CAP: usize = 2000;

pub fn sep_params(c: &ExperimentConfig) -> CliResult<Params> {
    Ok(Params::new(c.k, c.n, c.m_or_half())?)
}

/// Test hook: one rate of row 0 scaled by 3/2, which breaks the generator
/// identities the checks rely on.
pub fn corrupt(q: &RateMatrix) -> CliResult<RateMatrix> {
    let mut rows = q.to_rows();
    if let Some(first) = rows.iter_mut().find(|r| !r.is_empty()) {
        first[0].1 *= 1.5;
    }
    Ok(RateMatrix::from_rows(rows)?)
}

pub struct WallClock {
    started: Instant,
    cap: f64,
}

impl WallClock {
    pub fn new(c: &ExperimentConfig) -> Self {
        WallClock {
            started: Instant::now(),
            cap: c.max_wall_secs,
        }
    }

    /// Checked between work units; a unit in flight is not interrupted.
    pub fn check(&self, what: &str) -> CliResult<()> {
        let spent = self.started.elapsed().as_secs_f64();
        if self.cap > 0.0 && spent > self.cap {
            return Err(CliError::Budget(format!(
                "wall clock {spent:.1}s over max_wall_secs = {} before {what}",
                self.cap
            )));
        }
        Ok(())
    }
}

/// Exact distance to stationarity on an enumerated space.
pub enum Distances<'a> {
    Dense(ReversibleKernel),
    Sparse { q: &'a RateMatrix, mu: &'a [f64] },
}

impl<'a> Distances<'a> {
    /// The dense route needs reversibility, so a corrupted generator always
    /// takes the sparse one.
    pub fn new(q: &'a RateMatrix, mu: &'a [f64], allow_dense: bool) -> CliResult<Self> {
        if allow_dense && q.dim() <= DENSE_STATE_CAP {
            Ok(Distances::Dense(ReversibleKernel::new(q, mu)?))
        } else {
            Ok(Distances::Sparse { q, mu })
        }
    }

    pub fn worst(&self, t: f64) -> exclusion_core::Result<f64> {
        match self {
            Distances::Dense(k) => k.worst_case_distance(t),
            Distances::Sparse { q, mu } => worst_case_distance(q, mu, t),
        }
    }

    pub fn from(&self, start: usize, t: f64) -> exclusion_core::Result<f64> {
        match self {
            Distances::Dense(k) => k.distance_from(start, t),
            Distances::Sparse { q, mu } => distance_from(q, mu, start, t),
        }
    }
}

/// `N² ln(m) / (2kπ²)`, the cutoff location scale.
pub fn cutoff_scale(p: Params) -> f64 {
    (p.n() * p.n()) as f64 * (p.m().max(2) as f64).ln()
        / (2.0 * p.k() as f64 * std::f64::consts::PI.powi(2))
}
