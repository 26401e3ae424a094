//! Reproducible random streams.
//!
//! Every replication draws from its own generator whose seed is a pure
//! function of `(master_seed, replication_index, substream)`, so results do
//! not depend on the number of workers or on scheduling order.
//!
//! Gaussian variates are produced with the Marsaglia polar method on top of
//! ChaCha8 uniforms. Both choices are fixed: changing either changes every
//! sampled path.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// SplitMix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix two words into one seed.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(a) ^ b.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Identifies the random stream of a single replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub replication_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, replication_index: u64) -> Self {
        Self { master_seed, replication_index }
    }

    /// 64-bit seed of sub-stream `substream` of this replication.
    pub fn stream_seed(&self, substream: u64) -> u64 {
        mix_seed(mix_seed(self.master_seed, self.replication_index), substream)
    }

    pub fn rng(&self, substream: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.stream_seed(substream))
    }

    pub fn gaussian_stream(&self, substream: u64) -> GaussianStream<ChaCha8Rng> {
        GaussianStream::new(self.rng(substream))
    }
}

/// Standard normal variates by the polar method; the second variate of each
/// accepted pair is cached.
#[derive(Debug, Clone)]
pub struct GaussianStream<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> GaussianStream<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, spare: None }
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.rng.random::<f64>() - 1.0;
            let v = 2.0 * self.rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for x in out {
            *x = self.next_normal();
        }
    }
}
