//! Deterministic random instances.
//!
//! The generator is SplitMix64: the state advances by `0x9e3779b97f4a7c15`
//! and each output is the state passed through
//! `z ^= z >> 30; z *= 0xbf58476d1ce4e5b9; z ^= z >> 27; z *= 0x94d049bb133111eb; z ^= z >> 31`
//! (wrapping arithmetic). The initial state is the seed itself. A draw from the
//! inclusive range `[lo, hi]` is `lo + next() % (hi - lo + 1)`.
//!
//! [`generate`] draws, in this order:
//! 1. the `m * n` entries of `A` row by row from `[-delta, delta]`;
//! 2. a position `p` from `[0, m n - 1]` and a sign `s` from `[0, 1]`, then sets
//!    entry `p` (row-major) to `delta` if `s = 0` and to `-delta` otherwise, so
//!    the largest absolute entry is exactly `delta`;
//! 3. a hidden point `x0` with entries from `[0, 3]`, and sets `b = A x0`;
//! 4. the objective `c` with entries from `[-5, 5]`;
//! 5. when bounded, `u_i = x0_i + d_i` with `d_i` from `[0, 3]`.
//!
//! Every generated instance is feasible (`x0` satisfies it).

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::instance::{IPInstance, RawInstance};

#[derive(Debug, Clone)]
pub struct Sampler(SplitMix64);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish draw from the inclusive range `[lo, hi]`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi as i128 - lo as i128 + 1) as u128;
        (lo as i128 + (self.next_u64() as u128 % span) as i128) as i64
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.range(0, len as i64 - 1) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub m: usize,
    pub n: usize,
    pub delta: i64,
    pub seed: u64,
    pub bounded: bool,
}

pub fn generate(cfg: &GenConfig) -> IPInstance {
    assert!(cfg.m >= 1 && cfg.n >= 1 && cfg.delta >= 0, "invalid generator config");
    let mut rng = Sampler::new(cfg.seed);
    let (m, n, delta) = (cfg.m, cfg.n, cfg.delta);
    let mut a: Vec<Vec<i64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.range(-delta, delta)).collect())
        .collect();
    let p = rng.index(m * n);
    let sign = rng.range(0, 1);
    a[p / n][p % n] = if sign == 0 { delta } else { -delta };
    let x0: Vec<i64> = (0..n).map(|_| rng.range(0, 3)).collect();
    let b: Vec<i64> = a
        .iter()
        .map(|row| row.iter().zip(&x0).map(|(a, x)| a * x).sum())
        .collect();
    let c: Vec<i64> = (0..n).map(|_| rng.range(-5, 5)).collect();
    let upper: Option<Vec<i64>> = cfg
        .bounded
        .then(|| x0.iter().map(|x| x + rng.range(0, 3)).collect());
    let raw = RawInstance::from_i64(&a, &b, &c, upper.as_deref());
    crate::instance::validate(&raw).expect("generated instances are well formed")
}
