//! Combinatorial substrate: parameters, states, height functions, the
//! partial order, enumeration, and skeleton projections.

pub mod enumerate;
pub mod height;
pub mod params;
pub mod skeleton;
pub mod state;

pub use enumerate::{
    configuration_count, enumerate_configurations, enumerate_kpermutations, kpermutation_count,
    sep_space, shuffle_space, SepSpace, ShuffleSpace, StateSpace, DEFAULT_STATE_CAP,
};
pub use height::{
    compare_configurations, compare_kpermutations, compare_pointwise, extremal_states,
    height_of_configuration, height_of_kpermutation, invert_height, top_shuffle, HeightFunctionSep,
    HeightFunctionShuffle, OrderRelation,
};
pub use params::{Params, ShuffleParams};
pub use skeleton::{
    act, block_group_order, collapse_theta, count_action_matches, for_each_block_preserving,
    most_ordered_preimage, semi_skeleton, skeleton, stabilizer_intersection_order, Cuts,
    SkeletonData,
};
pub use state::{Configuration, KPermutation, Permutation};

/// Phi_m: `phi_m(sigma)(x) = |sigma(x) ∩ [m]|`.
pub fn project_phi(sigma: &KPermutation, m: usize) -> crate::error::Result<Configuration> {
    let params = sigma.params().with_m(m)?;
    let gamma = (1..=params.n())
        .map(|x| {
            sigma
                .packet(x)
                .iter()
                .filter(|&&c| (c as usize) <= m)
                .count() as u8
        })
        .collect();
    Ok(Configuration::from_raw(params, gamma))
}
