//! One run seed feeds every randomized pipeline through named sub-streams, so
//! results never depend on thread count or call order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::perm::mix64;

/// RNG for a named purpose derived from the run seed.
pub(crate) fn substream(seed: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, label))
}

/// Independent stream for one unit of work (a trajectory, a run, an epoch).
pub(crate) fn indexed_substream(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut rng = substream(seed, label);
    rng.set_stream(index.wrapping_add(1));
    rng
}

/// Derived scalar seed for handing down to a nested config.
pub(crate) fn derived_seed(seed: u64, label: &str, index: u64) -> u64 {
    mix64(stream_seed(seed, label) ^ mix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

fn stream_seed(seed: u64, label: &str) -> u64 {
    let mut h = mix64(seed ^ 0x5bf0_3635_d4d7_45e1);
    for &b in label.as_bytes() {
        h = mix64(h ^ b as u64);
    }
    h
}
