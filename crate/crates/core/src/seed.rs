//! Deterministic derivation of independent random streams from one base seed.

/// Mixes a base seed with a stream tag so that different tags yield
/// statistically unrelated seeds while staying fully reproducible.
///
/// Uses SplitMix64-style avalanche mixing.
pub fn subseed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit tag for arbitrary text, used to derive per-input seeds.
///
/// FNV-1a; hand-rolled so the value never depends on the standard library's
/// hasher internals.
pub fn text_tag(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
