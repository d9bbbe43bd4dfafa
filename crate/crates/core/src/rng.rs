//! Per-realization random streams.
//!
//! A realization's stream is ChaCha8 keyed by the master seed with the
//! realization index as the stream id, so any realization can be regenerated
//! without touching the others and ensembles are independent of execution
//! order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream-id space reserved for model disorder draws.
const MODEL_DOMAIN: u64 = 0;
/// Stream-id space reserved for synthetic reaction data.
const SYNTH_DOMAIN: u64 = 1 << 63;

pub fn realization_stream(master_seed: u64, realization_index: u64) -> StreamRng {
    stream(master_seed, MODEL_DOMAIN | (realization_index & !SYNTH_DOMAIN))
}

pub fn synth_stream(seed: u64, index: u64) -> StreamRng {
    stream(seed, SYNTH_DOMAIN | index)
}

fn stream(seed: u64, id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}
