use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Deterministic random stream addressed by `(seed, counter)`.
///
/// The stream is a value: callers materialise a generator with [`RngStream::rng`]
/// and derive independent sub-streams by label, so no generator state is ever
/// shared between workers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub counter: u64,
}

/// SplitMix64 finaliser.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, counter: 0 }
    }

    pub fn at(seed: u64, counter: u64) -> Self {
        RngStream { seed, counter }
    }

    /// Same seed, different sample index.
    pub fn with_counter(self, counter: u64) -> Self {
        RngStream { counter, ..self }
    }

    /// Independent stream for a named sub-task of this sample.
    pub fn substream(self, label: u64) -> Self {
        let seed = mix64(mix64(self.seed ^ mix64(self.counter)) ^ label.wrapping_mul(0xA24B_AED4_963E_E407));
        RngStream { seed, counter: 0 }
    }

    /// Sub-stream labelled by a string (FNV-1a of its bytes).
    pub fn named(self, name: &str) -> Self {
        let label = name
            .bytes()
            .fold(0xCBF2_9CE4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01B3));
        self.substream(label)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.counter);
        rng
    }

    /// Stateless 64-bit hash of this stream and a lattice key.
    pub fn hash(&self, key: &[i64]) -> u64 {
        let mut h = mix64(self.seed ^ mix64(self.counter.wrapping_add(0x632B_E59B_D9B4_E019)));
        for &k in key {
            h = mix64(h ^ (k as u64));
        }
        h
    }

    /// Hash mapped to `[0, 1)`.
    pub fn hash_unit(&self, key: &[i64]) -> f64 {
        (self.hash(key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
