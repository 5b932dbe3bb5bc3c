//! Lower bounds from an eigenfunction and the rough exponential upper bounds.

use crate::chain::{extremal_states, height_of_configuration, sep_space, Params};
use crate::error::{out_of_range, Error, Result};
use crate::exact::stationary_sep_measure;
use crate::spectral::eigen::{gap, EigenPair};

/// `t_mix(1 − ε) ≥ (1/λ) log ‖Ψ‖∞ − (1/2λ) log(8R/ε)` for an eigenfunction
/// `Ψ` with rate `λ` whose variance along the chain stays below `R`. The
/// value may be negative (vacuous) and is returned as-is.
pub fn wilson_lower_bound(psi_sup: f64, lambda: f64, r: f64, eps: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(out_of_range("lambda", format!("{lambda} must be positive")));
    }
    if !(psi_sup > 0.0) || !(r > 0.0) {
        return Err(out_of_range(
            "bound inputs",
            format!("sup {psi_sup}, R {r}"),
        ));
    }
    if !(eps > 0.0) {
        return Err(out_of_range("eps", format!("{eps} must be positive")));
    }
    Ok(psi_sup.ln() / lambda - (8.0 * r / eps).ln() / (2.0 * lambda))
}

/// Where the variance bound `R` for `f_1` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VarianceProxy {
    /// Exact `Var_μ(f_1)` by enumeration.
    Stationary,
    /// `max_η Γ(f_1)(η) / 2λ`, with `Γ` the carré du champ; bounds the
    /// variance along every trajectory of the martingale `e^{λt} f_1(η_t)`.
    Dirichlet,
    /// `C m N²` with a configured constant.
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundConfig {
    /// Proxy when the space is enumerable under `state_cap`.
    pub enumerable: VarianceProxy,
    /// Constant `C` of the `C m N²` fallback.
    pub constant: f64,
    pub state_cap: usize,
}

impl Default for LowerBoundConfig {
    fn default() -> Self {
        LowerBoundConfig {
            enumerable: VarianceProxy::Stationary,
            constant: 1.0,
            state_cap: crate::chain::DEFAULT_STATE_CAP,
        }
    }
}

/// `f_1` (height form) at the top configuration; `f_1` is increasing so
/// this is its maximum, and the mirror symmetry makes it `‖f_1‖∞`.
pub fn f1_sup(params: Params) -> f64 {
    let pair = EigenPair::new(params, 1).expect("N >= 2");
    let (top, bottom) = extremal_states(params);
    let hi = pair.f_height(&height_of_configuration(&top));
    let lo = pair.f_height(&height_of_configuration(&bottom));
    hi.abs().max(lo.abs())
}

/// `Var_μ(f_1)` by enumeration.
pub fn stationary_variance_f1(params: Params, cap: usize) -> Result<f64> {
    let space = sep_space(params, cap)?;
    let mu = stationary_sep_measure(&space);
    let f = EigenPair::new(params, 1)?.tabulate_height(&space);
    let mean: f64 = mu.iter().zip(&f).map(|(p, v)| p * v).sum();
    Ok(mu.iter().zip(&f).map(|(p, v)| p * (v - mean).powi(2)).sum())
}

/// `max_γ Γ(f_1)(γ) / 2λ_1`. A move across bond `(x, x+1)` shifts `η(x)` by
/// one, so `Γ(f_1)(γ) = Σ_x [γ(x)(k − γ(x+1)) + γ(x+1)(k − γ(x))] sin²(xπ/N)`.
pub fn dirichlet_variance_f1(params: Params, cap: usize) -> Result<f64> {
    let space = sep_space(params, cap)?;
    let (k, n) = (params.k() as f64, params.n());
    let weights: Vec<f64> = (1..n)
        .map(|x| (x as f64 * std::f64::consts::PI / n as f64).sin().powi(2))
        .collect();
    let sup = space
        .states()
        .iter()
        .map(|g| {
            let g = g.gamma();
            (0..n - 1)
                .map(|i| {
                    let (a, b) = (g[i] as f64, g[i + 1] as f64);
                    (a * (k - b) + b * (k - a)) * weights[i]
                })
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    Ok(sup / (2.0 * gap(n, params.k())))
}

/// Resolved variance proxy value and the route taken.
pub fn variance_proxy(params: Params, config: &LowerBoundConfig) -> Result<(f64, VarianceProxy)> {
    let fallback = VarianceProxy::Constant(config.constant);
    let route = match config.enumerable {
        VarianceProxy::Constant(_) => config.enumerable,
        other => {
            if crate::chain::configuration_count(params) <= config.state_cap as u128 {
                other
            } else {
                fallback
            }
        }
    };
    let value = match route {
        VarianceProxy::Stationary => stationary_variance_f1(params, config.state_cap)?,
        VarianceProxy::Dirichlet => dirichlet_variance_f1(params, config.state_cap)?,
        VarianceProxy::Constant(c) => c * params.m() as f64 * (params.n() * params.n()) as f64,
    };
    Ok((value, route))
}

/// Lower bound on `t_mix(eps)` from `f_1`, `λ_1`, and the configured
/// variance proxy. Requires `m ≤ Nk/2`.
pub fn theorem_lower_bound_with(
    params: Params,
    eps: f64,
    config: &LowerBoundConfig,
) -> Result<f64> {
    if 2 * params.m() > params.capacity() {
        return Err(Error::InvalidParams(format!(
            "lower bound needs m <= Nk/2, got m = {} with Nk = {}",
            params.m(),
            params.capacity()
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(out_of_range("eps", format!("{eps} not in (0, 1)")));
    }
    if params.m() == 0 {
        return Ok(0.0);
    }
    let (r, _) = variance_proxy(params, config)?;
    let sup = f1_sup(params);
    if r <= 0.0 {
        // deterministic f_1: nothing to mix
        return Ok(0.0);
    }
    wilson_lower_bound(sup, gap(params.n(), params.k()), r, 1.0 - eps)
}

pub fn theorem_lower_bound(params: Params, eps: f64) -> Result<f64> {
    theorem_lower_bound_with(params, eps, &LowerBoundConfig::default())
}

/// `min(1, 10 m e^{−λ_1 t})`.
pub fn rough_upper_bound(params: Params, t: f64) -> Result<f64> {
    rough(10.0 * params.m() as f64, params.n(), params.k(), t)
}

/// `min(1, 10 k N e^{−λ_1 t})`.
pub fn rough_upper_bound_shuffle(k: usize, n: usize, t: f64) -> Result<f64> {
    rough(10.0 * (k * n) as f64, n, k, t)
}

fn rough(prefactor: f64, n: usize, k: usize, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(out_of_range("t", format!("{t}")));
    }
    Ok((prefactor * (-gap(n, k) * t).exp()).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::DEFAULT_STATE_CAP;

    #[test]
    fn wilson_arithmetic() {
        assert_eq!(wilson_lower_bound(1.0, 3.0, 0.125, 1.0).unwrap(), 0.0);
        let a = wilson_lower_bound(5.0, 0.7, 2.0, 0.3).unwrap();
        let b = wilson_lower_bound(5.0, 0.7, 4.0, 0.3).unwrap();
        assert!((a - b - 2f64.ln() / 1.4).abs() < 1e-14);
        assert!(wilson_lower_bound(5.0, 0.0, 2.0, 0.3).is_err());
    }

    #[test]
    fn eps_near_one_is_vacuous() {
        let p = Params::new(1, 6, 3).unwrap();
        let near = theorem_lower_bound(p, 1.0 - 1e-12).unwrap();
        let mid = theorem_lower_bound(p, 0.5).unwrap();
        assert!(near < mid);
        assert!(near < -1.0);
        assert!(theorem_lower_bound(Params::new(1, 6, 4).unwrap(), 0.5).is_err());
    }

    #[test]
    fn f1_sup_dominates_mn_over_16() {
        for n in [8, 16, 32] {
            for k in 1..=3 {
                let p = Params::new(k, n, k * n / 2).unwrap();
                assert!(f1_sup(p) >= (p.m() * n) as f64 / 16.0);
            }
        }
    }

    #[test]
    fn dirichlet_proxy_dominates_stationary_variance() {
        for (k, n, m) in [(1, 4, 2), (2, 3, 2), (3, 4, 5), (2, 6, 6)] {
            let p = Params::new(k, n, m).unwrap();
            let s = stationary_variance_f1(p, DEFAULT_STATE_CAP).unwrap();
            let d = dirichlet_variance_f1(p, DEFAULT_STATE_CAP).unwrap();
            assert!(d >= s - 1e-12, "{k} {n} {m}: {d} < {s}");
        }
    }

    #[test]
    fn fallback_uses_constant() {
        let p = Params::new(2, 40, 40).unwrap();
        let cfg = LowerBoundConfig {
            state_cap: 1000,
            ..LowerBoundConfig::default()
        };
        let (r, route) = variance_proxy(p, &cfg).unwrap();
        assert_eq!(route, VarianceProxy::Constant(1.0));
        assert_eq!(r, 40.0 * 1600.0);
    }

    #[test]
    fn rough_bound_clamps() {
        let p = Params::new(1, 2, 1).unwrap();
        assert_eq!(rough_upper_bound(p, 0.0).unwrap(), 1.0);
        let t = 3.0;
        assert!((rough_upper_bound(p, t).unwrap() - 10.0 * (-2.0 * t).exp()).abs() < 1e-15);
        assert!(rough_upper_bound(p, t).unwrap() >= 0.5 * (-2.0 * t).exp());
        assert!(rough_upper_bound_shuffle(2, 3, -1.0).is_err());
    }
}
