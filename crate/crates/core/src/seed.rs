//! Per-record seed derivation.
//!
//! Every record gets its own generator seeded from the global seed and a
//! stable hash of the record key, so results do not depend on how records
//! are scheduled across threads.

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// `global ^ fnv1a(key)`.
pub fn derive_seed(global: u64, key: &str) -> u64 {
    global ^ fnv1a(key.as_bytes())
}
