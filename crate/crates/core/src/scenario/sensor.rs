use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::ledger::TxPayload;
use crate::sim::SimTime;

/// Upper end of the CO2 sensor's range.
pub const SENSOR_MAX_PPM: u32 = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum SensorKind {
    Constant(u32),
    Gaussian { mean: f64, sd: f64 },
    Trace(Vec<u32>),
}

/// Produces readings and encodes them as fixed-size payloads.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorModel {
    pub kind: SensorKind,
    /// From this time on, readings are centred on the given level instead.
    pub step: Option<(SimTime, u32)>,
}

impl Default for SensorModel {
    fn default() -> Self {
        SensorModel {
            kind: SensorKind::Gaussian {
                mean: 450.0,
                sd: 30.0,
            },
            step: None,
        }
    }
}

impl SensorModel {
    pub fn reading<R: Rng>(&self, seq: u32, now: SimTime, rng: &mut R) -> u32 {
        let stepped = self.step.filter(|(at, _)| now >= *at).map(|(_, ppm)| ppm);
        let v = match (&self.kind, stepped) {
            (SensorKind::Constant(c), None) => f64::from(*c),
            (SensorKind::Trace(t), None) => f64::from(t[seq as usize % t.len()]),
            (SensorKind::Constant(_) | SensorKind::Trace(_), Some(level)) => f64::from(level),
            (SensorKind::Gaussian { mean, sd }, level) => {
                let mean = level.map_or(*mean, f64::from);
                if *sd > 0.0 {
                    Normal::new(mean, *sd).expect("sd validated").sample(rng)
                } else {
                    mean
                }
            }
        };
        v.round().clamp(0.0, f64::from(SENSOR_MAX_PPM)) as u32
    }

    /// Encoded record padded to exactly `payload_bytes`.
    pub fn payload(sensor: u32, seq: u32, ppm: u32, payload_bytes: u32) -> Vec<u8> {
        let p = TxPayload::Reading { sensor, seq, ppm }.encode(payload_bytes as usize);
        debug_assert_eq!(p.len(), payload_bytes as usize);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn payload_is_exactly_p() {
        for p in [13, 50, 100, 150, 200] {
            assert_eq!(SensorModel::payload(1, 2, 450, p).len(), p as usize);
        }
    }

    #[test]
    fn gaussian_stays_near_mean() {
        let s = SensorModel::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 5000;
        let mean = (0..n).map(|i| f64::from(s.reading(i, SimTime::ZERO, &mut rng))).sum::<f64>() / f64::from(n);
        assert!((mean - 450.0).abs() < 2.0, "{mean}");
    }

    #[test]
    fn step_shifts_level() {
        let s = SensorModel {
            kind: SensorKind::Constant(450),
            step: Some((SimTime::from_secs(100), 1200)),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(s.reading(0, SimTime::from_secs(99), &mut rng), 450);
        assert_eq!(s.reading(1, SimTime::from_secs(100), &mut rng), 1200);
    }

    #[test]
    fn trace_cycles() {
        let s = SensorModel {
            kind: SensorKind::Trace(vec![1, 2, 3]),
            step: None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v: Vec<u32> = (0..5).map(|i| s.reading(i, SimTime::ZERO, &mut rng)).collect();
        assert_eq!(v, [1, 2, 3, 1, 2]);
    }
}
