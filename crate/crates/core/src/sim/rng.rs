//! Seeded, replayable random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream `replica` of the generator seeded by `seed`.
///
/// ChaCha streams with distinct stream ids never overlap, so replicas are
/// independent and each can be replayed alone.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}
