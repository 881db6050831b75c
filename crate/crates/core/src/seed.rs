//! Deterministic seed derivation: every randomized routine draws from a
//! ChaCha stream keyed by the run seed and a label describing its inputs.

/// FNV-1a over the label, mixed with the run seed.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
