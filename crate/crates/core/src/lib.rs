//! Capacity-k simple exclusion process and the packet shuffle: exact
//! generators and transient laws on small instances, closed-form spectral
//! data and bounds, and seeded monotone-coupling simulation for large ones.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod error;
pub mod exact;
pub mod sim;
pub mod spectral;

pub use chain::{
    Configuration, HeightFunctionSep, HeightFunctionShuffle, KPermutation, OrderRelation, Params,
    Permutation, ShuffleParams,
};
pub use error::{Error, Result};
