//! Reproducible Monte Carlo plumbing.
//!
//! Every estimator draws its samples in fixed-size chunks. Chunk `k` is served by
//! its own ChaCha8 stream: the 256-bit key is the little-endian seed followed by
//! zero bytes and the stream id is `k`. Chunk results are combined by pairwise
//! summation in chunk order, so the output depends only on `(seed, n)` and never
//! on the worker count.
//!
//! Normals come from the Box–Muller transform of two 53-bit uniforms, which keeps
//! the sequence fixed independently of any distribution crate.

use std::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

/// Samples per sub-stream.
pub const CHUNK: usize = 1 << 16;

/// Generator for sub-stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Uniform on `(0, 1]`.
#[inline]
pub fn uniform_open<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Pair of independent standard normals.
#[inline]
pub fn normal_pair<R: RngCore>(rng: &mut R) -> (f64, f64) {
    let u1 = uniform_open(rng);
    let u2 = uniform_open(rng);
    let radius = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (TAU * u2).sin_cos();
    (radius * c, radius * s)
}

/// Radial deviation `sqrt(x² + y²)` with `x, y ~ N(0, σ²)` independent.
#[inline]
pub fn radial<R: RngCore>(rng: &mut R, sigma: f64) -> f64 {
    let (x, y) = normal_pair(rng);
    let (x, y) = (sigma * x, sigma * y);
    (x * x + y * y).sqrt()
}

fn pairwise<const K: usize>(parts: &[[f64; K]]) -> [f64; K] {
    match parts.len() {
        0 => [0.0; K],
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            let (a, b) = (pairwise(l), pairwise(r));
            std::array::from_fn(|i| a[i] + b[i])
        }
    }
}

/// Sums `K` per-sample statistics over `n` samples.
///
/// `sample` draws one sample from the supplied generator and returns its
/// statistics. Chunks run on the rayon pool.
pub fn chunked_sum<const K: usize, F>(seed: u64, n: usize, sample: F) -> [f64; K]
where
    F: Fn(&mut ChaCha8Rng) -> [f64; K] + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<[f64; K]> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            let count = CHUNK.min(n - k * CHUNK);
            let mut acc = [0.0; K];
            for _ in 0..count {
                let s = sample(&mut rng);
                for (a, v) in acc.iter_mut().zip(s) {
                    *a += v;
                }
            }
            acc
        })
        .collect();
    pairwise(&parts)
}

/// Draws `n` values with the same chunk/stream layout as [`chunked_sum`].
pub fn chunked_samples<F>(seed: u64, n: usize, sample: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            let count = CHUNK.min(n - k * CHUNK);
            (0..count).map(|_| sample(&mut rng)).collect()
        })
        .collect();
    parts.concat()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a: Vec<u64> = (0..4).map(|_| stream_rng(7, 0).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(stream_rng(7, 0).next_u64(), stream_rng(7, 1).next_u64());
        assert_ne!(stream_rng(7, 0).next_u64(), stream_rng(8, 0).next_u64());
    }

    #[test]
    fn uniform_in_half_open_unit_interval() {
        let mut rng = stream_rng(1, 0);
        for _ in 0..10_000 {
            let u = uniform_open(&mut rng);
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn normal_moments() {
        let n = 400_000;
        let [s1, s2, cross] = chunked_sum(3, n, |rng| {
            let (x, y) = normal_pair(rng);
            [x + y, x * x + y * y, x * y]
        });
        let m = 2.0 * n as f64;
        assert!((s1 / m).abs() < 5e-3);
        assert!((s2 / m - 1.0).abs() < 1e-2);
        assert!((cross / n as f64).abs() < 5e-3);
    }

    #[test]
    fn sum_matches_samples_layout() {
        let n = CHUNK * 2 + 17;
        let xs = chunked_samples(5, n, |rng| radial(rng, 1.5));
        assert_eq!(xs.len(), n);
        let [s] = chunked_sum(5, n, |rng| [radial(rng, 1.5)]);
        let direct: f64 = xs.iter().sum();
        assert!(((s - direct) / direct).abs() < 1e-12);
    }

    #[test]
    fn zero_samples_sum_to_zero() {
        let [s] = chunked_sum(0, 0, |_| [1.0]);
        assert_eq!(s, 0.0);
    }
}
