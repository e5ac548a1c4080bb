//! Counter-based seed derivation.
//!
//! Every random stream in an experiment is keyed by a path of integers
//! (`master, experiment, graph, trial, ...`). The path is folded through the
//! SplitMix64 finalizer, so a stream depends only on its key and never on the
//! order in which jobs happen to run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `master` and a key path.
///
/// `derive(s, &[a, b])` differs from `derive(s, &[a])`, `derive(s, &[b, a])`
/// and `derive(s, &[a, b, 0])`: the path length is folded in as well.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    let mut h = mix64(master);
    for (depth, &key) in path.iter().enumerate() {
        h = mix64(h ^ mix64(key.wrapping_add((depth as u64 + 1).wrapping_mul(GOLDEN))));
    }
    mix64(h ^ path.len() as u64)
}

/// Stable 64-bit FNV-1a hash, used to turn setting labels into key components.
pub fn label_id(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `stream` of the generator seeded with `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
