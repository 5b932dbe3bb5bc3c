//! Lumpability of the shuffle onto the exclusion process under `φ_m`.

use crate::chain::{project_phi, sep_space, shuffle_space, ShuffleParams, ShuffleSpace};
use crate::error::Result;
use crate::exact::generator::{build_sep_generator, build_shuffle_generator, RateMatrix};

/// Maximum over shuffle states `σ` and configurations `γ' ≠ φ_m(σ)` of
/// `|Σ_{σ' ∈ φ_m^{-1}(γ')} Q(σ, σ') − Q_SEP(φ_m(σ), γ')|`.
///
/// Comparing every `σ` against the exclusion generator checks both that the
/// lumped rates depend on `σ` only through `φ_m(σ)` and that they equal the
/// exclusion rates.
pub fn lump_check(k: usize, n: usize, m: usize, cap: usize) -> Result<f64> {
    let sp = ShuffleParams::new(k, n)?;
    let params = sp.with_m(m)?;
    let shuffle = shuffle_space(sp, cap)?;
    let q_shuffle = build_shuffle_generator(&shuffle);
    let sep = sep_space(params, cap)?;
    let q_sep = build_sep_generator(&sep);
    lump_defect(&shuffle, &q_shuffle, m, &sep, &q_sep)
}

/// [`lump_check`] on prebuilt generators.
pub fn lump_defect(
    shuffle: &ShuffleSpace,
    q_shuffle: &RateMatrix,
    m: usize,
    sep: &crate::chain::SepSpace,
    q_sep: &RateMatrix,
) -> Result<f64> {
    let fiber: Vec<usize> = shuffle
        .states()
        .iter()
        .map(|s| {
            let g = project_phi(s, m)?;
            Ok(sep.index_of(&g).expect("projection lands in the space"))
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    let mut lumped = vec![0.0; sep.len()];
    for (i, &from) in fiber.iter().enumerate() {
        lumped.iter_mut().for_each(|v| *v = 0.0);
        for (j, r) in q_shuffle.row(i) {
            lumped[fiber[j]] += r;
        }
        for (to, &v) in lumped.iter().enumerate() {
            if to == from {
                continue;
            }
            worst = worst.max((v - q_sep.rate(from, to)).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{Configuration, Params, DEFAULT_STATE_CAP};

    #[test]
    fn lumped_rate_out_of_single_card() {
        // k=2, N=2, m=1: card 1 in packet 1 leaves at rate 2 (one per card of packet 2)
        let sp = ShuffleParams::new(2, 2).unwrap();
        let shuffle = shuffle_space(sp, DEFAULT_STATE_CAP).unwrap();
        let q = build_shuffle_generator(&shuffle);
        let p = Params::new(2, 2, 1).unwrap();
        let target = Configuration::new(p, vec![0, 1]).unwrap();
        for (i, s) in shuffle.states().iter().enumerate() {
            if project_phi(s, 1).unwrap().gamma() != [1, 0] {
                continue;
            }
            let out: f64 = q
                .row(i)
                .filter(|&(j, _)| project_phi(shuffle.state(j), 1).unwrap() == target)
                .map(|(_, r)| r)
                .sum();
            assert_eq!(out, 2.0);
        }
    }

    #[test]
    fn small_instances_lump() {
        assert_eq!(lump_check(2, 2, 0, DEFAULT_STATE_CAP).unwrap(), 0.0);
        for m in 1..=3 {
            assert!(lump_check(2, 3, m, DEFAULT_STATE_CAP).unwrap() < 1e-12);
        }
        assert!(lump_check(1, 4, 2, DEFAULT_STATE_CAP).unwrap() < 1e-12);
    }

    #[test]
    fn corrupted_generator_is_detected() {
        let sp = ShuffleParams::new(1, 3).unwrap();
        let shuffle = shuffle_space(sp, DEFAULT_STATE_CAP).unwrap();
        let mut rows = build_shuffle_generator(&shuffle).to_rows();
        rows[0][0].1 += 0.5;
        let q_bad = RateMatrix::from_rows(rows).unwrap();
        // every adjacent swap moves card 1 or card 2 across a cut, so one of
        // m = 1, 2 sees the perturbed edge
        let d2 = (1..=2)
            .map(|m| {
                let sep = sep_space(sp.with_m(m).unwrap(), DEFAULT_STATE_CAP).unwrap();
                lump_defect(&shuffle, &q_bad, m, &sep, &build_sep_generator(&sep)).unwrap()
            })
            .fold(0.0, f64::max);
        assert!(d2 > 0.4);
    }
}
