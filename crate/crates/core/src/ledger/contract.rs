use std::collections::{BTreeMap, VecDeque};

use crate::sim::ActorId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlarmEvent {
    pub sensor: ActorId,
    pub mean_ppm: f64,
    /// Number of readings committed for this sensor when the alarm fired.
    pub reading_index: u64,
}

/// Mean of the last `window_len` readings; an alarm iff the mean exceeds
/// `threshold`. The comparison is done on integer sums so it is exact.
pub fn evaluate_contract(
    sensor: ActorId,
    readings: &[u32],
    threshold: u32,
    window_len: usize,
) -> Option<AlarmEvent> {
    assert!(window_len >= 1);
    let window = &readings[readings.len().saturating_sub(window_len)..];
    if window.is_empty() {
        return None;
    }
    let sum: u64 = window.iter().map(|&r| u64::from(r)).sum();
    let n = window.len() as u64;
    (sum > u64::from(threshold) * n).then(|| AlarmEvent {
        sensor,
        mean_ppm: sum as f64 / n as f64,
        reading_index: readings.len() as u64,
    })
}

/// Windowed-average threshold alarm, evaluated on every committed reading.
#[derive(Debug, Clone)]
pub struct SmartContract {
    pub threshold: u32,
    pub window_len: usize,
    windows: BTreeMap<ActorId, (VecDeque<u32>, u64)>,
}

impl SmartContract {
    pub fn new(threshold: u32, window_len: usize) -> Self {
        assert!(window_len >= 1);
        SmartContract {
            threshold,
            window_len,
            windows: BTreeMap::new(),
        }
    }

    /// Records a committed reading. Returns the current window mean and the
    /// alarm, if any.
    pub fn observe(&mut self, sensor: ActorId, ppm: u32) -> (f64, Option<AlarmEvent>) {
        let (window, count) = self.windows.entry(sensor).or_default();
        window.push_back(ppm);
        if window.len() > self.window_len {
            window.pop_front();
        }
        *count += 1;
        let slice: Vec<u32> = window.iter().copied().collect();
        let sum: u64 = slice.iter().map(|&r| u64::from(r)).sum();
        let mean = sum as f64 / slice.len() as f64;
        let alarm = evaluate_contract(sensor, &slice, self.threshold, self.window_len).map(|mut a| {
            a.reading_index = *count;
            a
        });
        (mean, alarm)
    }
}
