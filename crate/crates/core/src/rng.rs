use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A ChaCha8 generator keyed by `seed` and positioned on an independent
/// stream. Streams never overlap, so work split by stream index reproduces
/// bit-identically regardless of evaluation order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deterministically mixes a parent seed with a list of indices
/// (splitmix64 finalizer per word).
pub fn derive_seed(parent: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix(parent ^ 0x9e37_79b9_7f4a_7c15);
    for &p in parts {
        h = splitmix(h ^ splitmix(p.wrapping_add(0x632b_e59b_d9b4_e019)));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
