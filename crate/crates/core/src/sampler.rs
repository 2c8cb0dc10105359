//! Ordered Rayleigh-fading channel pairs.
//!
//! Two users are paired at random; each squared gain is exponential with mean
//! `beta`. Sorting the two draws gives the weak/strong pair with joint density
//! `(2 / beta^2) exp(-(x1 + x2) / beta)` on `0 <= x1 <= x2`.
//!
//! # Streams
//!
//! A [`SamplerSeed`] `(master_seed, stream_index)` selects a ChaCha8 keystream:
//! the key comes from `ChaCha8Rng::seed_from_u64(master_seed)` and the
//! stream from `set_stream(stream_index)`. Every pair consumes exactly two
//! `u64` outputs (four 32-bit words), so pair `i` of a stream starts at word
//! `4 i` and [`ChannelSampler::seek`] can jump straight to it. Parallel
//! workers each own a sampler on the same stream, positioned at the start of
//! their slice.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChannelPair, SystemParams};

const WORDS_PER_PAIR: u128 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SamplerSeed {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SamplerSeed {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// A fresh 64-bit master seed for a sub-experiment, taken as the first
    /// output of this seed's stream.
    pub fn derive_seed(&self) -> u64 {
        self.rng().next_u64()
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Draws ordered channel pairs for one parameter set.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    rng: ChaCha8Rng,
    beta: f64,
}

impl ChannelSampler {
    pub fn new(params: &SystemParams, seed: SamplerSeed) -> Self {
        Self {
            rng: seed.rng(),
            beta: params.beta(),
        }
    }

    /// Positions the sampler so the next draw is pair number `index` of its stream.
    pub fn seek(&mut self, index: u64) {
        self.rng.set_word_pos(index as u128 * WORDS_PER_PAIR);
    }

    fn exponential(&mut self) -> f64 {
        // 53 random mantissa bits, u in [0, 1); inverse CDF of Exp(mean beta)
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        -self.beta * (-u).ln_1p()
    }

    /// Two iid exponential gains, sorted ascending.
    pub fn sample_pair(&mut self) -> ChannelPair {
        let x = self.exponential();
        let y = self.exponential();
        ChannelPair::sorted_unchecked(x, y)
    }
}

impl Iterator for ChannelSampler {
    type Item = ChannelPair;

    fn next(&mut self) -> Option<ChannelPair> {
        Some(self.sample_pair())
    }
}

fn check_threshold(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        Err(Error::InvalidGain(t))
    } else {
        Ok(t)
    }
}

/// `Pr{g1 >= t1, g2 >= t2}` for the ordered pair.
///
/// For `t1 <= t2` this is `2 e^{-(t1+t2)/beta} - e^{-2 t2/beta}`; otherwise
/// the `g1` constraint implies the `g2` one and the result is `e^{-2 t1/beta}`.
/// Infinite thresholds are allowed and give zero.
pub fn joint_survival(p: &SystemParams, t1: f64, t2: f64) -> Result<f64> {
    let (t1, t2) = (check_threshold(t1)?, check_threshold(t2)?);
    Ok(raw_joint_survival(p.beta(), t1, t2))
}

pub(crate) fn raw_joint_survival(beta: f64, t1: f64, t2: f64) -> f64 {
    if t1 <= t2 {
        if t2.is_infinite() {
            return 0.0;
        }
        2.0 * (-(t1 + t2) / beta).exp() - (-2.0 * t2 / beta).exp()
    } else {
        (-2.0 * t1 / beta).exp()
    }
}

/// `1 - joint_survival(t1, t2)`, evaluated without cancellation when both
/// thresholds are small.
pub(crate) fn raw_joint_failure(beta: f64, t1: f64, t2: f64) -> f64 {
    if t1 <= t2 {
        if t2.is_infinite() {
            return 1.0;
        }
        // 1 - 2e^{-x} + e^{-y} = -2 expm1(-x) + expm1(-y)
        -2.0 * (-(t1 + t2) / beta).exp_m1() + (-2.0 * t2 / beta).exp_m1()
    } else {
        -(-2.0 * t1 / beta).exp_m1()
    }
}

/// `Pr{g1 < t}`: the minimum of two Exp(beta) draws is Exp(beta / 2).
pub(crate) fn weak_cdf(beta: f64, t: f64) -> f64 {
    -(-2.0 * t / beta).exp_m1()
}

/// `Pr{g2 < t}`: both draws fall below `t`.
pub(crate) fn strong_cdf(beta: f64, t: f64) -> f64 {
    let single = -(-t / beta).exp_m1();
    single * single
}
