//! Closed-form spectral data, eigenfunction-based bounds and the mean-height
//! heat equation.

pub mod bounds;
pub mod eigen;
pub mod heat;

pub use bounds::{
    dirichlet_variance_f1, f1_sup, rough_upper_bound, rough_upper_bound_shuffle,
    stationary_variance_f1, theorem_lower_bound, theorem_lower_bound_with, variance_proxy,
    wilson_lower_bound, LowerBoundConfig, VarianceProxy,
};
pub use eigen::{
    eigen_residual, gap, generator_spectrum, lambda, spectrum_containment_defect, verify_eigenpair,
    EigenPair, EigenResidual,
};
pub use heat::{
    heat_solution, mean_height_global_envelope, mean_height_lower_envelope_from_top,
    mean_height_upper_envelope, top_height_profile, HeatProfile,
};
