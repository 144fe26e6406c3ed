//! Seeded random streams. Every stochastic routine takes an explicit 64-bit seed;
//! independent pieces of work (chains, sample batches) draw from numbered streams of
//! the same ChaCha key, so results do not depend on scheduling.

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub type StreamRng = ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
