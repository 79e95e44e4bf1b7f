//! Deterministic stratified Monte Carlo over axis-aligned boxes.
//!
//! Samples are grouped in shards of 32x32 jittered strata covering the whole
//! box. Each shard draws from its own ChaCha stream keyed by
//! `(seed, shard index)`, so a result depends only on the seed and the
//! sample count, never on how shards are scheduled across threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type C = Complex64;

pub const SHARD_SIDE: usize = 32;
pub const SHARD_SIZE: usize = SHARD_SIDE * SHARD_SIDE;

/// Mixes a master seed with an index (SplitMix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// An axis-aligned sampling box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBox {
    pub lo: C,
    pub hi: C,
}

impl SampleBox {
    pub fn square(center: C, half_side: f64) -> Self {
        SampleBox {
            lo: center - C::new(half_side, half_side),
            hi: center + C::new(half_side, half_side),
        }
    }

    pub fn area(&self) -> f64 {
        (self.hi.re - self.lo.re) * (self.hi.im - self.lo.im)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// First two sample moments of an integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance of a single draw.
    pub variance: f64,
}

impl Moments {
    pub fn standard_error(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }
}

/// Number of shards needed to cover `samples` draws (at least one).
pub fn shard_count(samples: usize) -> usize {
    samples.div_ceil(SHARD_SIZE).max(1)
}

/// Averages `f` over stratified points of `bx`.
pub fn sample_box<F>(seed: u64, samples: usize, bx: SampleBox, f: F) -> Moments
where
    F: Fn(C) -> f64 + Sync,
{
    let shards = shard_count(samples);
    let width = bx.hi.re - bx.lo.re;
    let height = bx.hi.im - bx.lo.im;
    let partial: Vec<(f64, f64)> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = stream_rng(seed, shard as u64);
            let mut s = CompensatedSum::default();
            let mut s2 = CompensatedSum::default();
            for j in 0..SHARD_SIDE {
                for i in 0..SHARD_SIDE {
                    let u: f64 = rng.gen();
                    let v: f64 = rng.gen();
                    let z = C::new(
                        bx.lo.re + width * (i as f64 + u) / SHARD_SIDE as f64,
                        bx.lo.im + height * (j as f64 + v) / SHARD_SIDE as f64,
                    );
                    let y = f(z);
                    s.add(y);
                    s2.add(y * y);
                }
            }
            (s.value(), s2.value())
        })
        .collect();
    let count = shards * SHARD_SIZE;
    let sum: CompensatedSum = partial.iter().map(|p| p.0).collect();
    let sum_sq: CompensatedSum = partial.iter().map(|p| p.1).collect();
    let mean = sum.value() / count as f64;
    let variance = ((sum_sq.value() - count as f64 * mean * mean) / (count as f64 - 1.0)).max(0.0);
    Moments { count, mean, variance }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand_has_zero_variance() {
        let m = sample_box(1, 5000, SampleBox::square(C::new(0.0, 0.0), 1.0), |_| 2.5);
        assert_eq!(m.count, 5 * SHARD_SIZE);
        assert!((m.mean - 2.5).abs() < 1e-14);
        assert!(m.variance < 1e-20);
    }

    #[test]
    fn linear_integrand_is_nearly_exact_under_stratification() {
        let bx = SampleBox {
            lo: C::new(0.0, 0.0),
            hi: C::new(2.0, 1.0),
        };
        let m = sample_box(7, 1 << 16, bx, |z| z.re + 3.0 * z.im);
        assert!((m.mean - 2.5).abs() < 1e-4);
    }

    #[test]
    fn same_seed_same_result_different_seed_differs() {
        let bx = SampleBox::square(C::new(0.0, 0.0), 1.0);
        let f = |z: C| if z.norm() <= 1.0 { 1.0 } else { 0.0 };
        let a = sample_box(3, 20_000, bx, f);
        let b = sample_box(3, 20_000, bx, f);
        let c = sample_box(4, 20_000, bx, f);
        assert_eq!(a, b);
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn result_independent_of_thread_count() {
        let bx = SampleBox::square(C::new(0.5, -0.5), 2.0);
        let f = |z: C| (z.re * z.im).sin();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sample_box(11, 50_000, bx, f))
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
