//! Benchmark fixtures shared by the criterion targets.

use exclusion_core::chain::{Params, ShuffleParams};

/// SEP instances used across benchmarks: small exact, mid exact.
pub fn exact_sep_cases() -> Vec<Params> {
    [(1, 8, 4), (2, 5, 5), (3, 4, 6)]
        .into_iter()
        .map(|(k, n, m)| Params::new(k, n, m).expect("valid bench params"))
        .collect()
}

pub fn exact_shuffle_cases() -> Vec<ShuffleParams> {
    [(2, 3), (1, 6), (2, 4)]
        .into_iter()
        .map(|(k, n)| ShuffleParams::new(k, n).expect("valid bench params"))
        .collect()
}
