//! Batch experiment harness: config parsing, deterministic sweep execution,
//! and CSV/plot-data emission for the attack and defense library.

pub mod config;
pub mod csvio;
pub mod report;
pub mod runner;

/// Tool version stamped into every output file header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// FNV-1a 64-bit hash; stable fingerprint for configs and derived seeds.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
