//! Transition kernels of reversible generators by dense symmetric
//! eigendecomposition. Independent of uniformization; cost is one `O(n³)`
//! factorisation, then `O(n²)` per start and time.

use nalgebra::{DMatrix, DVector};

use crate::error::{out_of_range, Error, Result};
use crate::exact::distance::tv_distance;
use crate::exact::generator::RateMatrix;

/// Detailed-balance defect allowed before the factorisation is refused.
pub const REVERSIBILITY_TOL: f64 = 1e-10;

/// `Q = D^{-1/2} V diag(−λ) Vᵀ D^{1/2}` with `D = diag(μ)`.
#[derive(Debug, Clone)]
pub struct ReversibleKernel {
    mu: Vec<f64>,
    root: Vec<f64>,
    /// Ascending relaxation rates `λ_i ≥ 0`.
    rates: DVector<f64>,
    /// Columns are orthonormal eigenvectors of the symmetrised generator.
    vectors: DMatrix<f64>,
}

impl ReversibleKernel {
    pub fn new(q: &RateMatrix, mu: &[f64]) -> Result<Self> {
        let n = q.dim();
        if mu.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: mu.len(),
            });
        }
        if mu.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Validation(
                "stationary measure must be positive".into(),
            ));
        }
        let defect = q.detailed_balance_defect(mu);
        if defect > REVERSIBILITY_TOL {
            return Err(Error::Validation(format!(
                "generator not reversible: defect {defect:e}"
            )));
        }
        let root: Vec<f64> = mu.iter().map(|v| v.sqrt()).collect();
        let mut s = q.to_dense();
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] *= root[i] / root[j];
            }
        }
        let sym = (&s + s.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        Ok(ReversibleKernel {
            mu: mu.to_vec(),
            root,
            rates: eig.eigenvalues.map(|v| (-v).max(0.0)),
            vectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// Relaxation rates, unsorted (order of the eigenvector columns).
    pub fn rates(&self) -> &[f64] {
        self.rates.as_slice()
    }

    /// Row `P_t(x, ·)`.
    pub fn row(&self, x: usize, t: f64) -> Result<Vec<f64>> {
        if x >= self.dim() {
            return Err(out_of_range("start", format!("{x} >= {}", self.dim())));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(out_of_range("t", format!("{t}")));
        }
        let w = DVector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|i| self.vectors[(x, i)] * (-self.rates[i] * t).exp()),
        );
        let v = &self.vectors * w;
        Ok((0..self.dim())
            .map(|y| (v[y] * self.root[y] / self.root[x]).max(0.0))
            .collect())
    }

    pub fn distance_from(&self, x: usize, t: f64) -> Result<f64> {
        tv_distance(&self.row(x, t)?, &self.mu)
    }

    /// The full matrix `P_t`, one dense product.
    pub fn kernel(&self, t: f64) -> Result<DMatrix<f64>> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(out_of_range("t", format!("{t}")));
        }
        let mut scaled = self.vectors.clone();
        for (i, mut col) in scaled.column_iter_mut().enumerate() {
            col *= (-self.rates[i] * t).exp();
        }
        let mut p = scaled * self.vectors.transpose();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                p[(x, y)] = (p[(x, y)] * self.root[y] / self.root[x]).max(0.0);
            }
        }
        Ok(p)
    }

    /// `max_x ‖P_t(x, ·) − μ‖_TV`.
    pub fn worst_case_distance(&self, t: f64) -> Result<f64> {
        let p = self.kernel(t)?;
        Ok((0..self.dim())
            .map(|x| {
                0.5 * (0..self.dim())
                    .map(|y| (p[(x, y)] - self.mu[y]).abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{sep_space, Params, DEFAULT_STATE_CAP};
    use crate::exact::{
        build_sep_generator, dirac, stationary_sep_measure, transient_distribution,
        worst_case_distance,
    };

    #[test]
    fn two_state_closed_form() {
        let q = RateMatrix::from_rows(vec![vec![(1, 3.0)], vec![(0, 1.0)]]).unwrap();
        let mu = [0.25, 0.75];
        let k = ReversibleKernel::new(&q, &mu).unwrap();
        for &t in &[0.0, 0.1, 1.0] {
            let p = k.row(0, t).unwrap();
            // P_t(0,0) = 1/4 + 3/4 e^{-4t}
            assert!((p[0] - (0.25 + 0.75 * (-4.0 * t).exp())).abs() < 1e-13);
        }
    }

    #[test]
    fn agrees_with_uniformization() {
        let p = Params::new(2, 4, 3).unwrap();
        let space = sep_space(p, DEFAULT_STATE_CAP).unwrap();
        let q = build_sep_generator(&space);
        let mu = stationary_sep_measure(&space);
        let kern = ReversibleKernel::new(&q, &mu).unwrap();
        for &t in &[0.05, 0.5, 2.0] {
            for x in [0, space.len() / 2, space.len() - 1] {
                let a = kern.row(x, t).unwrap();
                let b = transient_distribution(&q, &dirac(space.len(), x), t).unwrap();
                let err = a
                    .iter()
                    .zip(&b)
                    .map(|(u, v)| (u - v).abs())
                    .fold(0.0, f64::max);
                assert!(err < 1e-11, "t={t} x={x} err={err}");
            }
            let full = kern.kernel(t).unwrap();
            let r = kern.row(space.len() / 2, t).unwrap();
            assert!((0..space.len()).all(|y| (full[(space.len() / 2, y)] - r[y]).abs() < 1e-13));
            let d1 = kern.worst_case_distance(t).unwrap();
            let d2 = worst_case_distance(&q, &mu, t).unwrap();
            assert!((d1 - d2).abs() < 1e-11);
        }
    }

    #[test]
    fn refuses_nonreversible() {
        // 3-cycle with uniform stationary law
        let q =
            RateMatrix::from_rows(vec![vec![(1, 1.0)], vec![(2, 1.0)], vec![(0, 1.0)]]).unwrap();
        assert!(ReversibleKernel::new(&q, &[1.0 / 3.0; 3]).is_err());
    }
}
