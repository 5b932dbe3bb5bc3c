//! Seeded simulation of the monotone couplings at scales beyond enumeration.

pub mod area;
pub mod coalescence;
pub mod events;
pub mod mean;
pub mod rng;
pub mod schedule;
pub mod sep;
pub mod shuffle;
pub mod trajectory;

pub use area::{
    area_process, area_summary, bad_set_frequencies, bad_set_membership, flat_window,
    sample_stationary, AreaRecord, AreaSummary, BadSets,
};
pub use coalescence::{
    coalescence_estimate, coalescence_time, wilson_interval, CoalescenceEstimate,
    CoalescenceOutcome, ExtremalPair, QuantileEstimate, SurvivalPoint,
};
pub use events::{SepEvent, SepEventStream, ShuffleEvent, ShuffleEventStream};
pub use mean::{
    mc_mean_height_sep, mc_mean_height_shuffle, mc_sep_height_means, mc_shuffle_height_means,
    MeanEstimate,
};
pub use rng::replica_rng;
pub use schedule::{phase_times, three_phase_schedule};
pub use sep::{simulate_sep_coupling, PrefixState};
pub use shuffle::{apply_shuffle_event, simulate_shuffle_grand_coupling};
pub use trajectory::{CoupledTrajectory, Observation, RunStats, SimOptions};
