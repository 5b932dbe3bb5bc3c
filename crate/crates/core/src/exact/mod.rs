//! Exact analysis on enumerated state spaces: generators, transient laws,
//! distances, censoring, lumpability, smoothing, correlation and domination.

pub mod censor;
pub mod distance;
pub mod domination;
pub mod fkg;
pub mod generator;
pub mod lump;
pub mod reversible;
pub mod smoothing;
pub mod transient;

pub use censor::{censored_transient_distribution, CensoringScheme, UpdateMask};
pub use distance::{
    default_mixing_bracket, distance_from, mixing_time, mixing_time_by, tv_distance,
    worst_case_distance, MIXING_TIME_TOL,
};
pub use domination::{min_upset_margin, ordered_coupling_mass, stochastically_dominates};
pub use fkg::{
    fkg_check, height_table, is_increasing, order_matrix, random_increasing_fn, IncreasingFn,
};
pub use generator::{
    build_censored_shuffle_generator, build_sep_generator, build_shuffle_generator,
    stationary_normaliser, stationary_sep_measure, uniform_measure, RateMatrix,
};
pub use lump::{lump_check, lump_defect};
pub use reversible::{ReversibleKernel, REVERSIBILITY_TOL};
pub use smoothing::{
    group_average, skeleton_marginal, smooth_and_project, FiberIndex, SkeletonMarginal, Smoothed,
};
pub use transient::{
    dirac, transient_distribution, transient_expectation, validate_distribution, UNIFORMIZATION_TOL,
};
