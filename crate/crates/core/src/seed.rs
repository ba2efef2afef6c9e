//! Deterministic seed derivation for per-trial and per-block RNG streams.

/// Mixes a master seed with an index (SplitMix64 finaliser), so that trial
/// `i` of a run seeded with `master` always sees the same stream.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
