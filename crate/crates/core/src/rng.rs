//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream keyed by
//! the user seed; the 64-bit stream id is derived from a path of integers
//! (purpose tag, size, chunk index, ...). Work is always split into chunks of
//! a fixed size before it is spread over threads, so results depend only on the
//! seed and never on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::columns::ColumnSet;

pub type StreamRng = ChaCha8Rng;

/// Trials per independently seeded chunk in the Monte Carlo routines.
pub const CHUNK: u64 = 1 << 14;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for the stream identified by `path` under `seed`.
pub fn stream_rng(seed: u64, path: &[u64]) -> StreamRng {
    let id = path
        .iter()
        .fold(0x5354_4f50_5245_4421u64, |acc, &p| splitmix64(acc ^ splitmix64(p)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Uniform `k`-subset of `0..n` as a mask (Floyd's algorithm, `n <= 64`).
#[inline]
pub fn floyd_mask<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> u64 {
    debug_assert!(n <= 64 && k <= n);
    let mut mask = 0u64;
    for j in (n - k)..n {
        let t = rng.random_range(0..=j);
        let bit = if mask >> t & 1 == 1 { 1u64 << j } else { 1u64 << t };
        mask |= bit;
    }
    mask
}

/// Uniform `k`-subset of `0..n` for any `n` (Floyd's algorithm).
pub fn floyd_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> ColumnSet {
    assert!(k <= n);
    let mut set = ColumnSet::empty(n);
    for j in (n - k)..n {
        let t = rng.random_range(0..=j);
        let pick = if set.contains(t) { j } else { t };
        set.insert(pick).expect("in range");
    }
    set
}

/// A fresh seed for runs where the user did not give one.
pub fn random_seed() -> u64 {
    rand::random()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: u64 = stream_rng(7, &[1, 2]).random();
        let b: u64 = stream_rng(7, &[1, 2]).random();
        let c: u64 = stream_rng(7, &[2, 1]).random();
        let d: u64 = stream_rng(8, &[1, 2]).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn floyd_returns_k_distinct_elements() {
        let mut rng = stream_rng(1, &[0]);
        for k in 0..=24 {
            let m = floyd_mask(&mut rng, 24, k);
            assert_eq!(m.count_ones() as usize, k);
            assert_eq!(m >> 24, 0);
        }
        let s = floyd_subset(&mut rng, 100, 17);
        assert_eq!(s.len(), 17);
    }

    #[test]
    fn floyd_is_uniform_on_small_case() {
        // all C(5,2) = 10 subsets should appear roughly equally often
        let mut rng = stream_rng(3, &[9]);
        let mut counts = std::collections::HashMap::new();
        let trials = 100_000;
        for _ in 0..trials {
            *counts.entry(floyd_mask(&mut rng, 5, 2)).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 10);
        for &c in counts.values() {
            // expectation 10^4, sd ~ 95
            assert!((c as f64 - 10_000.0).abs() < 600.0, "count {c}");
        }
    }
}
