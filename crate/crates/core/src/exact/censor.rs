//! Censoring masks and piecewise-constant censoring schemes for the shuffle.

use crate::chain::{ShuffleParams, ShuffleSpace};
use crate::error::{out_of_range, Error, Result};
use crate::exact::generator::build_censored_shuffle_generator;
use crate::exact::transient::transient_distribution;

/// Allowed updates `(x, i, j)`, `x ∈ 1..N`, `i, j ∈ 1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpdateMask {
    k: usize,
    n: usize,
    allowed: Vec<bool>,
}

impl UpdateMask {
    pub fn all(params: ShuffleParams) -> Self {
        Self::filled(params, true)
    }

    pub fn none(params: ShuffleParams) -> Self {
        Self::filled(params, false)
    }

    fn filled(params: ShuffleParams, value: bool) -> Self {
        UpdateMask {
            k: params.k(),
            n: params.n(),
            allowed: vec![value; params.label_count()],
        }
    }

    /// Everything except the listed bonds.
    pub fn censor_bonds(params: ShuffleParams, bonds: &[usize]) -> Result<Self> {
        let mut mask = Self::all(params);
        for &x in bonds {
            mask.set_bond(x, false)?;
        }
        Ok(mask)
    }

    fn index(&self, x: usize, i: usize, j: usize) -> usize {
        debug_assert!(
            x >= 1 && x < self.n && (1..=self.k).contains(&i) && (1..=self.k).contains(&j)
        );
        (x - 1) * self.k * self.k + (i - 1) * self.k + (j - 1)
    }

    pub fn set(&mut self, x: usize, i: usize, j: usize, allowed: bool) -> Result<()> {
        if x == 0 || x >= self.n || i == 0 || i > self.k || j == 0 || j > self.k {
            return Err(out_of_range("update", format!("({x}, {i}, {j})")));
        }
        let idx = self.index(x, i, j);
        self.allowed[idx] = allowed;
        Ok(())
    }

    pub fn set_bond(&mut self, x: usize, allowed: bool) -> Result<()> {
        for i in 1..=self.k {
            for j in 1..=self.k {
                self.set(x, i, j, allowed)?;
            }
        }
        Ok(())
    }

    pub fn allows(&self, x: usize, i: usize, j: usize) -> bool {
        self.allowed[self.index(x, i, j)]
    }

    pub fn is_all(&self) -> bool {
        self.allowed.iter().all(|&a| a)
    }

    pub fn is_none(&self) -> bool {
        self.allowed.iter().all(|&a| !a)
    }

    pub fn allowed_count(&self) -> usize {
        self.allowed.iter().filter(|&&a| a).count()
    }

    /// Bonds with at least one censored label.
    pub fn censored_bonds(&self) -> Vec<usize> {
        (1..self.n)
            .filter(|&x| (1..=self.k).any(|i| (1..=self.k).any(|j| !self.allows(x, i, j))))
            .collect()
    }

    pub fn params(&self) -> ShuffleParams {
        ShuffleParams::new(self.k, self.n).expect("mask built from valid params")
    }
}

/// Right-continuous piecewise-constant schedule of masks on `[0, horizon)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CensoringScheme {
    pieces: Vec<(f64, UpdateMask)>,
    horizon: f64,
}

impl CensoringScheme {
    /// `pieces` are `(start, mask)` with the first start at 0 and starts
    /// strictly increasing and below `horizon`.
    pub fn new(pieces: Vec<(f64, UpdateMask)>, horizon: f64) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Validation("censoring scheme needs a piece".into()));
        }
        if pieces[0].0 != 0.0 {
            return Err(Error::Validation("first piece must start at 0".into()));
        }
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(out_of_range("horizon", format!("{horizon}")));
        }
        let params = pieces[0].1.params();
        for w in pieces.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Validation("piece starts must increase".into()));
            }
        }
        if let Some((s, _)) = pieces.iter().find(|(s, _)| !(*s < horizon)) {
            return Err(Error::Validation(format!(
                "piece start {s} not below horizon"
            )));
        }
        if pieces.iter().any(|(_, m)| m.params() != params) {
            return Err(Error::ParamsMismatch("masks of different sizes".into()));
        }
        Ok(CensoringScheme { pieces, horizon })
    }

    pub fn constant(mask: UpdateMask, horizon: f64) -> Result<Self> {
        Self::new(vec![(0.0, mask)], horizon)
    }

    pub fn uncensored(params: ShuffleParams, horizon: f64) -> Result<Self> {
        Self::constant(UpdateMask::all(params), horizon)
    }

    pub fn pieces(&self) -> &[(f64, UpdateMask)] {
        &self.pieces
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn params(&self) -> ShuffleParams {
        self.pieces[0].1.params()
    }

    /// Mask in force at time `t` (right-continuous; the last piece extends
    /// to the horizon).
    pub fn mask_at(&self, t: f64) -> &UpdateMask {
        let pos = self.pieces.partition_point(|(s, _)| *s <= t);
        &self.pieces[pos.saturating_sub(1)].1
    }

    /// Piece boundaries intersected with `[0, t]`, as `(from, to, mask)`.
    pub fn segments_until(&self, t: f64) -> Vec<(f64, f64, &UpdateMask)> {
        let mut out = Vec::new();
        for (idx, (start, mask)) in self.pieces.iter().enumerate() {
            if *start >= t {
                break;
            }
            let end = self
                .pieces
                .get(idx + 1)
                .map_or(self.horizon, |(s, _)| *s)
                .min(t);
            out.push((*start, end, mask));
        }
        out
    }

    /// Short human-readable form, e.g. `[0,1):-{1} [1,2):all`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for (idx, (start, mask)) in self.pieces.iter().enumerate() {
            let end = self.pieces.get(idx + 1).map_or(self.horizon, |(s, _)| *s);
            let what = if mask.is_all() {
                "all".to_string()
            } else if mask.is_none() {
                "none".to_string()
            } else {
                let bonds: Vec<String> = mask
                    .censored_bonds()
                    .iter()
                    .map(|b| b.to_string())
                    .collect();
                format!("-{{{}}}", bonds.join(","))
            };
            parts.push(format!("[{start},{end}):{what}"));
        }
        parts.join(" ")
    }
}

/// Evolves `nu0` through the censored generators of `scheme` up to time `t`.
pub fn censored_transient_distribution(
    space: &ShuffleSpace,
    nu0: &[f64],
    scheme: &CensoringScheme,
    t: f64,
) -> Result<Vec<f64>> {
    if t > scheme.horizon() {
        return Err(out_of_range(
            "t",
            format!("time {t} beyond scheme horizon {}", scheme.horizon()),
        ));
    }
    if !(t >= 0.0) {
        return Err(out_of_range("t", format!("{t}")));
    }
    if let Some(s) = space.states().first() {
        if s.params() != scheme.params() {
            return Err(Error::ParamsMismatch("scheme and space differ".into()));
        }
    }
    let mut nu = nu0.to_vec();
    for (from, to, mask) in scheme.segments_until(t) {
        if to <= from || mask.is_none() {
            continue;
        }
        let q = build_censored_shuffle_generator(space, mask);
        nu = transient_distribution(&q, &nu, to - from)?;
    }
    Ok(nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{shuffle_space, DEFAULT_STATE_CAP};
    use crate::exact::generator::build_shuffle_generator;
    use crate::exact::transient::dirac;

    fn sp(k: usize, n: usize) -> ShuffleParams {
        ShuffleParams::new(k, n).unwrap()
    }

    #[test]
    fn mask_indexing() {
        let p = sp(2, 3);
        let mut m = UpdateMask::all(p);
        assert!(m.is_all());
        m.set(2, 1, 2, false).unwrap();
        assert!(!m.allows(2, 1, 2));
        assert!(m.allows(2, 2, 1));
        assert_eq!(m.allowed_count(), 7);
        assert_eq!(m.censored_bonds(), vec![2]);
        assert!(m.set(3, 1, 1, false).is_err());
        let c = UpdateMask::censor_bonds(p, &[1]).unwrap();
        assert_eq!(c.censored_bonds(), vec![1]);
        assert_eq!(c.allowed_count(), 4);
    }

    #[test]
    fn scheme_lookup_is_right_continuous() {
        let p = sp(1, 3);
        let s = CensoringScheme::new(
            vec![(0.0, UpdateMask::none(p)), (1.0, UpdateMask::all(p))],
            2.0,
        )
        .unwrap();
        assert!(s.mask_at(0.5).is_none());
        assert!(s.mask_at(1.0).is_all());
        assert!(s.mask_at(5.0).is_all());
        assert_eq!(s.segments_until(1.5).len(), 2);
        assert_eq!(s.describe(), "[0,1):none [1,2):all");
    }

    #[test]
    fn scheme_validation() {
        let p = sp(1, 3);
        assert!(CensoringScheme::new(vec![], 1.0).is_err());
        assert!(CensoringScheme::new(vec![(0.5, UpdateMask::all(p))], 1.0).is_err());
        assert!(CensoringScheme::new(
            vec![(0.0, UpdateMask::all(p)), (0.0, UpdateMask::none(p))],
            1.0
        )
        .is_err());
        assert!(CensoringScheme::new(
            vec![(0.0, UpdateMask::all(p)), (2.0, UpdateMask::none(p))],
            1.0
        )
        .is_err());
    }

    #[test]
    fn trivial_schemes() {
        let p = sp(2, 2);
        let space = shuffle_space(p, DEFAULT_STATE_CAP).unwrap();
        let nu0 = dirac(space.len(), 0);
        let all = CensoringScheme::uncensored(p, 3.0).unwrap();
        let q = build_shuffle_generator(&space);
        let a = censored_transient_distribution(&space, &nu0, &all, 1.3).unwrap();
        let b = transient_distribution(&q, &nu0, 1.3).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-13);
        }
        let none = CensoringScheme::constant(UpdateMask::none(p), 3.0).unwrap();
        assert_eq!(
            censored_transient_distribution(&space, &nu0, &none, 2.0).unwrap(),
            nu0
        );
        assert!(censored_transient_distribution(&space, &nu0, &none, 4.0).is_err());
    }
}
