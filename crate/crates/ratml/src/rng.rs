//! Deterministic stream splitting. Every random quantity in the crate draws
//! from a ChaCha8 stream keyed by `(seed, label, indices)` through SHA-256,
//! so results are reproducible bit-for-bit regardless of evaluation order or
//! worker count.

use rand::SeedableRng;
use sha2::{Digest, Sha256};

pub use rand_chacha::ChaCha8Rng;

/// Independent substream for one labeled event, e.g.
/// `stream(seed, "trial", &[t])` for Monte Carlo trial `t`.
pub fn stream(seed: u64, label: &str, indices: &[u64]) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    for &index in indices {
        hasher.update(index.to_le_bytes());
    }
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// Uniform draw from `[0, 1)` with 53 random bits, stable across platforms.
#[inline]
pub fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    use rand::RngCore;
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
