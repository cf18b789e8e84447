use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::SimError;

pub type StreamId = &'static str;

/// Named, seed-derived random streams.
///
/// Each stream is seeded from `sha256(seed || name)`, so streams are
/// independent of each other and of the order in which they are used.
#[derive(Debug, Clone)]
pub struct RngStreams {
    seed: u64,
    streams: BTreeMap<String, ChaCha8Rng>,
}

impl RngStreams {
    pub fn new<'a>(seed: u64, names: impl IntoIterator<Item = &'a str>) -> Self {
        let mut rs = RngStreams {
            seed,
            streams: BTreeMap::new(),
        };
        for name in names {
            rs.register(name);
        }
        rs
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn register(&mut self, name: &str) {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update(name.as_bytes());
        let seed: [u8; 32] = h.finalize().into();
        self.streams
            .entry(name.to_owned())
            .or_insert_with(|| ChaCha8Rng::from_seed(seed));
    }

    pub fn stream(&mut self, name: &str) -> Result<&mut ChaCha8Rng, SimError> {
        self.streams
            .get_mut(name)
            .ok_or_else(|| SimError::UnknownStream(name.to_owned()))
    }

    /// Uniform draw in `[0, 1)`.
    pub fn next_random(&mut self, name: &str) -> Result<f64, SimError> {
        Ok(self.stream(name)?.gen::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draws(rs: &mut RngStreams, name: &str, n: usize) -> Vec<f64> {
        (0..n).map(|_| rs.next_random(name).unwrap()).collect()
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RngStreams::new(42, ["preamble"]);
        let mut b = RngStreams::new(42, ["preamble"]);
        assert_eq!(draws(&mut a, "preamble", 100), draws(&mut b, "preamble", 100));
    }

    #[test]
    fn unknown_stream_rejected() {
        let mut rs = RngStreams::new(1, ["preamble"]);
        assert_eq!(
            rs.next_random("nope"),
            Err(SimError::UnknownStream("nope".into()))
        );
    }

    #[test]
    fn streams_are_uncorrelated() {
        let mut rs = RngStreams::new(7, ["preamble", "sensor-noise"]);
        let n = 10_000;
        let a = draws(&mut rs, "preamble", n);
        let b = draws(&mut rs, "sensor-noise", n);
        assert_ne!(a[..10], b[..10]);
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (ma, mb) = (mean(&a), mean(&b));
        let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        let corr = cov / (va.sqrt() * vb.sqrt());
        assert!(corr.abs() < 0.05, "correlation {corr}");
    }

    #[test]
    fn uniform_mean() {
        let mut rs = RngStreams::new(3, ["x"]);
        let v = draws(&mut rs, "x", 100_000);
        let m = v.iter().sum::<f64>() / v.len() as f64;
        assert!((0.49..=0.51).contains(&m), "mean {m}");
        assert!(v.iter().all(|x| (0.0..1.0).contains(x)));
    }

    #[test]
    fn registration_order_is_irrelevant() {
        let mut a = RngStreams::new(9, ["a", "b"]);
        let mut b = RngStreams::new(9, ["b", "a"]);
        assert_eq!(draws(&mut a, "b", 10), draws(&mut b, "b", 10));
    }
}
