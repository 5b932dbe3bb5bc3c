//! Stochastic domination between measures on a finite poset.
//!
//! `ν ⪰ ν'` iff `ν(U) ≥ ν'(U)` for every up-set `U`, iff some coupling puts
//! all its mass on pairs `(a, b)` with `a ≥ b`. Small posets use the first
//! characterisation directly; larger ones the second, as a max-flow problem.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Up-set enumeration is used only at or below this many states.
pub const UPSET_STATE_LIMIT: usize = 30;

/// Up-set enumeration stops after this many sets.
pub const UPSET_BUDGET: u128 = 1 << 24;

fn check_dims(geq: &[Vec<bool>], nu: &[f64], nu_prime: &[f64]) -> Result<()> {
    if nu.len() != geq.len() || nu_prime.len() != geq.len() {
        return Err(Error::DimensionMismatch {
            expected: geq.len(),
            got: nu.len().max(nu_prime.len()),
        });
    }
    Ok(())
}

/// Smallest `ν(U) − ν'(U)` over all up-sets `U`; `ν ⪰ ν'` iff this is
/// `≥ −tol`. Requires at most [`UPSET_STATE_LIMIT`] states.
pub fn min_upset_margin(geq: &[Vec<bool>], nu: &[f64], nu_prime: &[f64]) -> Result<f64> {
    check_dims(geq, nu, nu_prime)?;
    let n = geq.len();
    if n > UPSET_STATE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "states for up-set enumeration",
            needed: n as u128,
            cap: UPSET_STATE_LIMIT as u128,
        });
    }
    // linear extension from the top: a strictly larger state dominates
    // strictly more states
    let mut order: Vec<usize> = (0..n).collect();
    let below = |a: usize| geq[a].iter().filter(|&&g| g).count();
    order.sort_by_key(|&a| std::cmp::Reverse(below(a)));
    let diff: Vec<f64> = (0..n).map(|a| nu[a] - nu_prime[a]).collect();

    struct Walk<'a> {
        geq: &'a [Vec<bool>],
        order: &'a [usize],
        diff: &'a [f64],
        included: Vec<bool>,
        best: f64,
        visited: u128,
    }
    impl Walk<'_> {
        fn go(&mut self, pos: usize, acc: f64) -> Result<()> {
            if pos == self.order.len() {
                self.visited += 1;
                if self.visited > UPSET_BUDGET {
                    return Err(Error::BudgetExceeded {
                        what: "up-sets",
                        needed: self.visited,
                        cap: UPSET_BUDGET,
                    });
                }
                self.best = self.best.min(acc);
                return Ok(());
            }
            let a = self.order[pos];
            let can_include =
                (0..self.order.len()).all(|b| b == a || !self.geq[b][a] || self.included[b]);
            if can_include {
                self.included[a] = true;
                self.go(pos + 1, acc + self.diff[a])?;
                self.included[a] = false;
            }
            self.go(pos + 1, acc)
        }
    }
    let mut walk = Walk {
        geq,
        order: &order,
        diff: &diff,
        included: vec![false; n],
        best: f64::INFINITY,
        visited: 0,
    };
    walk.go(0, 0.0)?;
    Ok(walk.best)
}

/// Maximum mass a coupling of `ν` and `ν'` can put on ordered pairs
/// `(a ≥ b)`; `ν ⪰ ν'` iff this is the full mass.
pub fn ordered_coupling_mass(geq: &[Vec<bool>], nu: &[f64], nu_prime: &[f64]) -> Result<f64> {
    check_dims(geq, nu, nu_prime)?;
    let n = geq.len();
    let source = 2 * n;
    let sink = 2 * n + 1;
    let mut net = FlowNetwork::new(2 * n + 2);
    for a in 0..n {
        if nu[a] > 0.0 {
            net.add_edge(source, a, nu[a]);
        }
        if nu_prime[a] > 0.0 {
            net.add_edge(n + a, sink, nu_prime[a]);
        }
    }
    for a in 0..n {
        if nu[a] <= 0.0 {
            continue;
        }
        for b in 0..n {
            if geq[a][b] && nu_prime[b] > 0.0 {
                net.add_edge(a, n + b, f64::INFINITY);
            }
        }
    }
    Ok(net.max_flow(source, sink))
}

/// `ν ⪰ ν'` within `tol`, choosing the route by size.
pub fn stochastically_dominates(
    geq: &[Vec<bool>],
    nu: &[f64],
    nu_prime: &[f64],
    tol: f64,
) -> Result<bool> {
    if geq.len() <= UPSET_STATE_LIMIT {
        Ok(min_upset_margin(geq, nu, nu_prime)? >= -tol)
    } else {
        let total: f64 = nu_prime.iter().sum();
        Ok(ordered_coupling_mass(geq, nu, nu_prime)? >= total - tol)
    }
}

/// Dinic max flow on real capacities.
struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<f64>,
}

const FLOW_EPS: f64 = 1e-15;

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: f64) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0.0);
    }

    fn levels(&self, s: usize) -> Vec<i64> {
        let mut level = vec![-1i64; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > FLOW_EPS && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn push(&mut self, u: usize, t: usize, limit: f64, level: &[i64], next: &mut [usize]) -> f64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let e = self.adj[u][next[u]];
            let v = self.to[e];
            if self.cap[e] > FLOW_EPS && level[v] == level[u] + 1 {
                let pushed = self.push(v, t, limit.min(self.cap[e]), level, next);
                if pushed > FLOW_EPS {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        loop {
            let level = self.levels(s);
            if level[t] < 0 {
                return total;
            }
            let mut next = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.push(s, t, f64::INFINITY, &level, &mut next);
                if pushed <= FLOW_EPS {
                    break;
                }
                total += pushed;
            }
        }
    }
}
