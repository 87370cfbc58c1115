//! Named, counter-based random streams.
//!
//! A stream is identified by the master seed, a domain tag and two counters
//! (for example area and realization index). Draws from one stream never
//! depend on how many other streams were opened before it, which keeps
//! parallel runs bit-identical to sequential ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. Distinct domains never share keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Curves = 1,
    Anneal = 2,
    Temperature = 3,
    Instances = 4,
    Construct = 5,
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fold a list of words into one seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(seed), |acc, &p| mix64(acc ^ mix64(p)))
}

/// 64-bit FNV-1a, used to turn labels into stream counters.
pub fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Open the stream `(seed, domain, key, index)`.
pub fn stream(seed: u64, domain: Domain, key: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[domain as u64, key]));
    rng.set_stream(index);
    rng
}
