//! Shared trajectory records.

/// States of every tracked copy at one observation time.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<S> {
    pub time: f64,
    pub states: Vec<S>,
}

/// Counters accumulated over one coupled run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Clock rings drawn (including rejected and censored ones).
    pub rings: u64,
    /// Rings skipped by a censoring scheme.
    pub censored: u64,
    /// Rings that moved at least one tracked copy.
    pub effective: u64,
    /// Single-copy state changes.
    pub moves: u64,
    /// Ordered pairs found out of order after an event.
    pub violations: u64,
    /// Pair comparisons performed by the order check.
    pub order_checks: u64,
}

impl RunStats {
    pub fn merge(&mut self, other: &RunStats) {
        self.rings += other.rings;
        self.censored += other.censored;
        self.effective += other.effective;
        self.moves += other.moves;
        self.violations += other.violations;
        self.order_checks += other.order_checks;
    }
}

/// Copies driven by one event stream, with optional observations and log.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledTrajectory<S, E> {
    pub initials: Vec<S>,
    pub finals: Vec<S>,
    pub observations: Vec<Observation<S>>,
    pub log: Option<Vec<E>>,
    pub stats: RunStats,
    pub horizon: f64,
}

/// Run controls shared by both couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub horizon: f64,
    /// Strictly increasing times in `[0, horizon]` at which to record states.
    pub observe: Vec<f64>,
    pub record_log: bool,
    /// Compare every initially ordered pair after each event.
    pub check_order: bool,
}

impl SimOptions {
    pub fn new(horizon: f64) -> Self {
        SimOptions {
            horizon,
            observe: Vec::new(),
            record_log: false,
            check_order: false,
        }
    }

    pub fn observe(mut self, times: Vec<f64>) -> Self {
        self.observe = times;
        self
    }

    pub fn with_log(mut self) -> Self {
        self.record_log = true;
        self
    }

    pub fn with_order_check(mut self) -> Self {
        self.check_order = true;
        self
    }

    pub(crate) fn validate(&self) -> crate::error::Result<()> {
        use crate::error::{out_of_range, Error};
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(out_of_range("horizon", format!("{}", self.horizon)));
        }
        if self.observe.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Validation("observation times must increase".into()));
        }
        if self
            .observe
            .iter()
            .any(|&t| !(t >= 0.0) || t > self.horizon)
        {
            return Err(Error::Validation(
                "observation time outside [0, horizon]".into(),
            ));
        }
        Ok(())
    }
}
