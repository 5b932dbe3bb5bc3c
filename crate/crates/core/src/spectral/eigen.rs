//! Closed-form eigenpairs of the exclusion generator.

use std::f64::consts::PI;

use crate::chain::{height_of_configuration, Configuration, HeightFunctionSep, Params, SepSpace};
use crate::error::{out_of_range, Error, Result};
use crate::exact::RateMatrix;

/// `λ_{N,k,j} = 2k(1 − cos(jπ/N))` for `0 ≤ j ≤ N − 1`.
pub fn lambda(n: usize, k: usize, j: usize) -> Result<f64> {
    if j >= n {
        return Err(out_of_range("j", format!("{j} not in 0..{n}")));
    }
    Ok(lambda_unchecked(n, k, j as f64))
}

/// Spectral gap rate `λ_{N,k,1}` used by the bounds.
pub fn gap(n: usize, k: usize) -> f64 {
    lambda_unchecked(n, k, 1.0)
}

pub(crate) fn lambda_unchecked(n: usize, k: usize, j: f64) -> f64 {
    2.0 * k as f64 * (1.0 - (j * PI / n as f64).cos())
}

/// Mode `j` with its rate and both functional forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub params: Params,
    pub j: usize,
    pub lambda: f64,
}

impl EigenPair {
    pub fn new(params: Params, j: usize) -> Result<Self> {
        Ok(EigenPair {
            params,
            j,
            lambda: lambda(params.n(), params.k(), j)?,
        })
    }

    /// `Σ_x γ(x) cos((2x − 1)jπ / 2N)`.
    pub fn f_particle(&self, gamma: &Configuration) -> f64 {
        let n = self.params.n() as f64;
        gamma
            .gamma()
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let x = (i + 1) as f64;
                g as f64 * ((2.0 * x - 1.0) * self.j as f64 * PI / (2.0 * n)).cos()
            })
            .sum()
    }

    /// `Σ_x η(x) sin(xjπ / N)`.
    pub fn f_height(&self, eta: &HeightFunctionSep) -> f64 {
        let n = self.params.n();
        (1..n)
            .map(|x| eta.value(x) * (x as f64 * self.j as f64 * PI / n as f64).sin())
            .sum()
    }

    pub fn tabulate_particle(&self, space: &SepSpace) -> Vec<f64> {
        space.states().iter().map(|g| self.f_particle(g)).collect()
    }

    pub fn tabulate_height(&self, space: &SepSpace) -> Vec<f64> {
        space
            .states()
            .iter()
            .map(|g| self.f_height(&height_of_configuration(g)))
            .collect()
    }

    /// `2 sin(jπ / 2N)`: summation by parts turns the particle form into
    /// this multiple of the height form for `j ≥ 1`.
    pub fn form_ratio(&self) -> f64 {
        2.0 * (self.j as f64 * PI / (2.0 * self.params.n() as f64)).sin()
    }
}

/// `max_i |(Q f)(i) + λ f(i)|`.
pub fn eigen_residual(q: &RateMatrix, f: &[f64], lambda: f64) -> Result<f64> {
    if f.len() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            got: f.len(),
        });
    }
    Ok(q.apply_right(f)
        .iter()
        .zip(f)
        .map(|(qf, v)| (qf + lambda * v).abs())
        .fold(0.0, f64::max))
}

/// Residuals of both forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResidual {
    pub particle: f64,
    pub height: f64,
}

impl EigenResidual {
    pub fn max(&self) -> f64 {
        self.particle.max(self.height)
    }
}

pub fn verify_eigenpair(
    q: &RateMatrix,
    space: &SepSpace,
    pair: &EigenPair,
) -> Result<EigenResidual> {
    Ok(EigenResidual {
        particle: eigen_residual(q, &pair.tabulate_particle(space), pair.lambda)?,
        height: eigen_residual(q, &pair.tabulate_height(space), pair.lambda)?,
    })
}

/// Eigenvalues of `−Q` for a generator reversible with respect to `mu`,
/// via the symmetrisation `D^{1/2} Q D^{-1/2}`, sorted ascending.
pub fn generator_spectrum(q: &RateMatrix, mu: &[f64]) -> Result<Vec<f64>> {
    if mu.len() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            got: mu.len(),
        });
    }
    let mut dense = q.to_dense();
    let root: Vec<f64> = mu.iter().map(|v| v.sqrt()).collect();
    for i in 0..q.dim() {
        for j in 0..q.dim() {
            dense[(i, j)] *= root[i] / root[j];
        }
    }
    // symmetrise away rounding
    let sym = (&dense + dense.transpose()) * 0.5;
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().map(|v| -v).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Largest distance from a target to its nearest spectrum entry.
pub fn spectrum_containment_defect(spectrum: &[f64], targets: &[f64]) -> f64 {
    targets
        .iter()
        .map(|t| {
            spectrum
                .iter()
                .map(|s| (s - t).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}
