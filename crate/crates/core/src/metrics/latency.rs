use crate::crypto::Digest;
use crate::sim::{ActorId, SimTime};

/// Stage timestamps of one transaction. Stages a mode does not have (e.g.
/// endorsement in baseline mode) stay `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatencyRecord {
    pub tx_id: Digest,
    pub ue: ActorId,
    pub t_generated: SimTime,
    pub t_ul_delivered: Option<SimTime>,
    pub t_endorsed: Option<SimTime>,
    pub t_ordered: Option<SimTime>,
    pub t_committed: Option<SimTime>,
    pub t_confirmed: Option<SimTime>,
}

impl LatencyRecord {
    pub fn new(tx_id: Digest, ue: ActorId, t_generated: SimTime) -> Self {
        LatencyRecord {
            tx_id,
            ue,
            t_generated,
            t_ul_delivered: None,
            t_endorsed: None,
            t_ordered: None,
            t_committed: None,
            t_confirmed: None,
        }
    }

    pub fn e2e(&self) -> Option<SimTime> {
        self.t_confirmed.map(|t| t - self.t_generated)
    }

    /// Present timestamps are non-decreasing in stage order.
    pub fn stages_ordered(&self) -> bool {
        let stages = [
            Some(self.t_generated),
            self.t_ul_delivered,
            self.t_endorsed,
            self.t_ordered,
            self.t_committed,
            self.t_confirmed,
        ];
        let present: Vec<SimTime> = stages.into_iter().flatten().collect();
        present.windows(2).all(|w| w[0] <= w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistBin {
    pub start: SimTime,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct E2eStats {
    pub count: usize,
    pub mean_s: f64,
    pub p95: SimTime,
    pub histogram: Vec<HistBin>,
}

pub const HIST_BIN: SimTime = SimTime::from_ms(100);

/// Nearest-rank percentile: the `ceil(q * n)`-th smallest value.
pub fn percentile_nearest_rank(sorted: &[SimTime], q: f64) -> SimTime {
    assert!(!sorted.is_empty());
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// Mean, 95th percentile and a 100 ms histogram over completed records.
pub fn e2e_stats(records: &[LatencyRecord]) -> Option<E2eStats> {
    let mut lat: Vec<SimTime> = records.iter().filter_map(LatencyRecord::e2e).collect();
    if lat.is_empty() {
        return None;
    }
    lat.sort_unstable();
    let sum: u128 = lat.iter().map(|t| u128::from(t.as_us())).sum();
    let mean_s = sum as f64 / lat.len() as f64 / 1e6;
    let p95 = percentile_nearest_rank(&lat, 0.95);
    let width = HIST_BIN.as_us();
    let mut histogram: Vec<HistBin> = Vec::new();
    for t in &lat {
        let start = SimTime::from_us(t.as_us() / width * width);
        match histogram.last_mut() {
            Some(b) if b.start == start => b.count += 1,
            _ => histogram.push(HistBin { start, count: 1 }),
        }
    }
    Some(E2eStats {
        count: lat.len(),
        mean_s,
        p95,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crypto::digest;

    fn rec(i: u64, e2e: SimTime) -> LatencyRecord {
        let mut r = LatencyRecord::new(digest(&i.to_le_bytes()), ActorId::Ue(0), SimTime::from_secs(i));
        r.t_confirmed = Some(SimTime::from_secs(i) + e2e);
        r
    }

    #[test]
    fn single_record() {
        let s = e2e_stats(&[rec(0, SimTime::from_ms(900))]).unwrap();
        assert_eq!(s.mean_s, 0.9);
        assert_eq!(s.p95, SimTime::from_ms(900));
        assert_eq!(s.histogram, [HistBin { start: SimTime::from_ms(900), count: 1 }]);
    }

    #[test]
    fn p95_nearest_rank() {
        let recs: Vec<_> = (1..=100).map(|i| rec(i, SimTime::from_secs(i))).collect();
        let s = e2e_stats(&recs).unwrap();
        assert_eq!(s.p95, SimTime::from_secs(95));
        assert_eq!(s.mean_s, 50.5);
    }

    #[test]
    fn incomplete_records_skipped() {
        let open = LatencyRecord::new(digest(b"x"), ActorId::Ue(0), SimTime::ZERO);
        assert!(e2e_stats(std::slice::from_ref(&open)).is_none());
        let s = e2e_stats(&[open, rec(1, SimTime::from_ms(10))]).unwrap();
        assert_eq!(s.count, 1);
    }

    #[test]
    fn stage_order_check() {
        let mut r = rec(1, SimTime::from_ms(10));
        assert!(r.stages_ordered());
        r.t_committed = Some(SimTime::from_secs(100));
        assert!(!r.stages_ordered());
    }
}
