//! Height functions and the partial order they induce.
//!
//! Heights carry the fractional offset `x*m/N` (or `x*y/N`), so they are
//! stored multiplied by `N`; all arithmetic stays in integers.

use crate::chain::params::{Params, ShuffleParams};
use crate::chain::state::{Configuration, KPermutation};
use crate::error::{Error, Result};

/// Height function of a configuration, stored as `N * eta(x)` for `x = 0..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeightFunctionSep {
    scaled: Vec<i64>,
    params: Params,
}

impl HeightFunctionSep {
    /// Wraps pre-scaled values `N * eta(x)`. Only the shape and the boundary
    /// zeros are checked here; increments are checked by [`invert_height`].
    pub fn from_scaled(params: Params, scaled: Vec<i64>) -> Result<Self> {
        if scaled.len() != params.n() + 1 {
            return Err(Error::Validation(format!(
                "height has {} points, expected N+1 = {}",
                scaled.len(),
                params.n() + 1
            )));
        }
        if scaled[0] != 0 || scaled[params.n()] != 0 {
            return Err(Error::Validation("height must vanish at 0 and N".into()));
        }
        Ok(HeightFunctionSep { scaled, params })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    /// `N * eta(x)`.
    pub fn scaled(&self, x: usize) -> i64 {
        self.scaled[x]
    }

    pub fn scaled_values(&self) -> &[i64] {
        &self.scaled
    }

    /// `eta(x)` as a float.
    pub fn value(&self, x: usize) -> f64 {
        self.scaled[x] as f64 / self.params.n() as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..=self.params.n()).map(|x| self.value(x)).collect()
    }
}

/// `eta(x) = sum_{z <= x} gamma(z) - x m / N`.
pub fn height_of_configuration(gamma: &Configuration) -> HeightFunctionSep {
    let p = gamma.params();
    let n = p.n() as i64;
    let m = p.m() as i64;
    let scaled = gamma
        .prefix_counts()
        .into_iter()
        .enumerate()
        .map(|(x, c)| n * c - x as i64 * m)
        .collect();
    HeightFunctionSep { scaled, params: p }
}

/// Recovers `gamma(x) = eta(x) - eta(x-1) + m/N`.
pub fn invert_height(eta: &HeightFunctionSep) -> Result<Configuration> {
    let p = eta.params;
    let n = p.n() as i64;
    let m = p.m() as i64;
    let mut gamma = Vec::with_capacity(p.n());
    for x in 1..=p.n() {
        let num = eta.scaled[x] - eta.scaled[x - 1] + m;
        if num % n != 0 {
            return Err(Error::Validation(format!(
                "increment at x = {x} is not an integer occupancy"
            )));
        }
        let g = num / n;
        if g < 0 || g > p.k() as i64 {
            return Err(Error::Validation(format!(
                "increment at x = {x} gives occupancy {g} outside 0..={}",
                p.k()
            )));
        }
        gamma.push(g as u8);
    }
    Configuration::new(p, gamma)
}

/// Height function of a k-permutation, stored as `N * sigma~(x, y)` on the
/// grid `x = 0..=N`, `y = 0..=kN`, row-major in `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeightFunctionShuffle {
    scaled: Vec<i64>,
    params: ShuffleParams,
}

impl HeightFunctionShuffle {
    pub fn params(&self) -> ShuffleParams {
        self.params
    }

    fn width(&self) -> usize {
        self.params.cards() + 1
    }

    /// `N * sigma~(x, y)`.
    pub fn scaled(&self, x: usize, y: usize) -> i64 {
        self.scaled[x * self.width() + y]
    }

    pub fn value(&self, x: usize, y: usize) -> f64 {
        self.scaled(x, y) as f64 / self.params.n() as f64
    }

    /// `1_{y in sigma(x)}` recovered from the second difference of the height.
    pub fn indicator(&self, x: usize, y: usize) -> Result<bool> {
        let n = self.params.n() as i64;
        let d = self.scaled(x, y) - self.scaled(x - 1, y) - self.scaled(x, y - 1)
            + self.scaled(x - 1, y - 1)
            + 1;
        match d {
            0 => Ok(false),
            _ if d == n => Ok(true),
            _ => Err(Error::Validation(format!(
                "second difference at ({x}, {y}) is {d}/N, not an indicator"
            ))),
        }
    }

    pub fn scaled_values(&self) -> &[i64] {
        &self.scaled
    }
}

/// Prefix counts `C(x, y) = sum_{z <= x} |sigma(z) ∩ [y]|`, row-major in `x`.
pub(crate) fn prefix_card_counts(sigma: &KPermutation) -> Vec<i64> {
    let p = sigma.params();
    let w = p.cards() + 1;
    let packet_of = sigma.packet_of_cards();
    let mut out = vec![0i64; (p.n() + 1) * w];
    for x in 1..=p.n() {
        let mut acc = 0i64;
        for y in 1..=p.cards() {
            if (packet_of[y - 1] as usize) <= x {
                acc += 1;
            }
            out[x * w + y] = acc;
        }
    }
    out
}

/// `sigma~(x, y) = sum_{z <= x} |sigma(z) ∩ [y]| - x y / N`.
pub fn height_of_kpermutation(sigma: &KPermutation) -> HeightFunctionShuffle {
    let p = sigma.params();
    let n = p.n() as i64;
    let w = p.cards() + 1;
    let mut scaled = prefix_card_counts(sigma);
    for x in 0..=p.n() {
        for y in 0..w {
            scaled[x * w + y] = n * scaled[x * w + y] - (x * y) as i64;
        }
    }
    HeightFunctionShuffle { scaled, params: p }
}

/// Result of comparing two elements of a partially ordered set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderRelation {
    Leq,
    Geq,
    Eq,
    Incomparable,
}

impl OrderRelation {
    /// `a >= b` (including equality).
    pub fn is_geq(self) -> bool {
        matches!(self, OrderRelation::Geq | OrderRelation::Eq)
    }

    pub fn is_leq(self) -> bool {
        matches!(self, OrderRelation::Leq | OrderRelation::Eq)
    }
}

/// Pointwise comparison of two equally shaped functions.
pub fn compare_pointwise(a: &[i64], b: &[i64]) -> OrderRelation {
    debug_assert_eq!(a.len(), b.len());
    let mut some_less = false;
    let mut some_greater = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            some_less = true;
        } else if x > y {
            some_greater = true;
        }
        if some_less && some_greater {
            return OrderRelation::Incomparable;
        }
    }
    match (some_less, some_greater) {
        (false, false) => OrderRelation::Eq,
        (true, false) => OrderRelation::Leq,
        (false, true) => OrderRelation::Geq,
        (true, true) => OrderRelation::Incomparable,
    }
}

pub fn compare_configurations(a: &Configuration, b: &Configuration) -> Result<OrderRelation> {
    if a.params() != b.params() {
        return Err(Error::ParamsMismatch(format!(
            "{:?} vs {:?}",
            a.params(),
            b.params()
        )));
    }
    Ok(compare_pointwise(&a.prefix_counts(), &b.prefix_counts()))
}

pub fn compare_kpermutations(a: &KPermutation, b: &KPermutation) -> Result<OrderRelation> {
    if a.params() != b.params() {
        return Err(Error::ParamsMismatch(format!(
            "{:?} vs {:?}",
            a.params(),
            b.params()
        )));
    }
    Ok(compare_pointwise(
        &prefix_card_counts(a),
        &prefix_card_counts(b),
    ))
}

/// The maximal configuration (particles pushed left) and the minimal one
/// (pushed right).
pub fn extremal_states(params: Params) -> (Configuration, Configuration) {
    let k = params.k();
    let n = params.n();
    let mut top = vec![0u8; n];
    let mut left = params.m();
    for slot in top.iter_mut() {
        let take = left.min(k);
        *slot = take as u8;
        left -= take;
    }
    let mut bottom = top.clone();
    bottom.reverse();
    (
        Configuration::from_raw(params, top),
        Configuration::from_raw(params, bottom),
    )
}

/// `θ(id)`, the maximal k-permutation.
pub fn top_shuffle(params: ShuffleParams) -> KPermutation {
    KPermutation::top(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(k: usize, n: usize, m: usize, g: &[u8]) -> Configuration {
        Configuration::new(Params::new(k, n, m).unwrap(), g.to_vec()).unwrap()
    }

    #[test]
    fn hand_evaluated_height() {
        let eta = height_of_configuration(&cfg(1, 3, 2, &[1, 0, 1]));
        // (0, 1/3, -1/3, 0)
        assert_eq!(eta.scaled_values(), &[0, 1, -1, 0]);
        assert_eq!(invert_height(&eta).unwrap().gamma(), &[1, 0, 1]);
    }

    #[test]
    fn empty_configuration_is_flat() {
        let eta = height_of_configuration(&cfg(2, 4, 0, &[0, 0, 0, 0]));
        assert!(eta.scaled_values().iter().all(|&v| v == 0));
        assert_eq!(invert_height(&eta).unwrap().gamma(), &[0, 0, 0, 0]);
    }

    #[test]
    fn inadmissible_increment_is_rejected() {
        let p = Params::new(1, 3, 1).unwrap();
        // eta = (0, 5/3, 1/3, 0): first increment gives occupancy 2 > k
        let eta = HeightFunctionSep::from_scaled(p, vec![0, 5, 1, 0]).unwrap();
        assert!(invert_height(&eta).is_err());
        // non-integer occupancy
        let eta = HeightFunctionSep::from_scaled(p, vec![0, 1, 1, 0]).unwrap();
        assert!(invert_height(&eta).is_err());
        assert!(HeightFunctionSep::from_scaled(p, vec![0, 1, 1, 1]).is_err());
    }

    #[test]
    fn top_shuffle_height() {
        let p = ShuffleParams::new(2, 2).unwrap();
        let h = height_of_kpermutation(&top_shuffle(p));
        // packet 1 = {1, 2}: sigma~(1, 2) = 2 - 1*2/2 = 1
        assert_eq!(h.value(1, 2), 1.0);
    }

    #[test]
    fn extremal_heights() {
        let p = Params::new(2, 3, 2).unwrap();
        let (top, bottom) = extremal_states(p);
        assert_eq!(top.gamma(), &[2, 0, 0]);
        assert_eq!(bottom.gamma(), &[0, 0, 2]);
        // (0, 4/3, 2/3, 0)
        assert_eq!(height_of_configuration(&top).scaled_values(), &[0, 4, 2, 0]);

        let (top, bottom) = extremal_states(Params::new(1, 4, 2).unwrap());
        assert_eq!(top.gamma(), &[1, 1, 0, 0]);
        assert_eq!(bottom.gamma(), &[0, 0, 1, 1]);
        assert_eq!(
            compare_configurations(&top, &bottom).unwrap(),
            OrderRelation::Geq
        );

        let (top, bottom) = extremal_states(Params::new(3, 4, 0).unwrap());
        assert_eq!(top, bottom);
    }

    #[test]
    fn order_relations() {
        let a = cfg(1, 3, 1, &[1, 0, 0]);
        let b = cfg(1, 3, 1, &[0, 0, 1]);
        assert_eq!(compare_configurations(&a, &b).unwrap(), OrderRelation::Geq);
        assert_eq!(compare_configurations(&b, &a).unwrap(), OrderRelation::Leq);
        assert_eq!(compare_configurations(&a, &a).unwrap(), OrderRelation::Eq);
        let c = cfg(2, 3, 2, &[0, 2, 0]);
        let d = cfg(2, 3, 2, &[1, 0, 1]);
        // prefix counts (0,0,2,2) vs (0,1,1,2)
        assert_eq!(
            compare_configurations(&c, &d).unwrap(),
            OrderRelation::Incomparable
        );
        let e = cfg(2, 3, 1, &[1, 0, 0]);
        assert!(compare_configurations(&c, &e).is_err());
    }
}
