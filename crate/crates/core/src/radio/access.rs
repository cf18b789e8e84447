use std::collections::BTreeMap;

use rand::Rng;

use crate::sim::{ActorId, SimTime};

/// Per-contender result of one NPRACH occasion, in registration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RaOutcome {
    pub ue: ActorId,
    pub preamble: u32,
    pub success: bool,
}

/// A contender succeeds iff no other contender picked the same preamble.
pub fn collision_outcomes(preambles: &[u32]) -> Vec<bool> {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &p in preambles {
        *counts.entry(p).or_default() += 1;
    }
    preambles.iter().map(|p| counts[p] == 1).collect()
}

/// NPRACH occasions of one cell and the preambles registered for them.
#[derive(Debug, Clone)]
pub struct RandomAccessChannel {
    period: SimTime,
    pool: u32,
    resolved_through: Option<SimTime>,
    occasions: BTreeMap<SimTime, Vec<(ActorId, u32)>>,
}

impl RandomAccessChannel {
    pub fn new(period: SimTime, pool: u32) -> Self {
        assert!(pool >= 1);
        RandomAccessChannel {
            period,
            pool,
            resolved_through: None,
            occasions: BTreeMap::new(),
        }
    }

    pub fn pool(&self) -> u32 {
        self.pool
    }

    /// First occasion at or after `ready` that has not been resolved yet.
    pub fn next_occasion(&self, ready: SimTime) -> SimTime {
        let t = ready.next_multiple_of(self.period);
        match self.resolved_through {
            Some(r) if t <= r => r + self.period,
            _ => t,
        }
    }

    pub fn draw_preamble<R: Rng>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.pool)
    }

    /// Registers `ue` with `preamble` at the next occasion. Returns the
    /// occasion and whether it is the first registration for it (the caller
    /// schedules resolution exactly once per occasion).
    pub fn register(&mut self, ue: ActorId, ready: SimTime, preamble: u32) -> (SimTime, bool) {
        assert!(preamble < self.pool, "preamble out of pool");
        let occasion = self.next_occasion(ready);
        let slot = self.occasions.entry(occasion).or_default();
        let first = slot.is_empty();
        slot.push((ue, preamble));
        (occasion, first)
    }

    pub fn contenders(&self, occasion: SimTime) -> usize {
        self.occasions.get(&occasion).map_or(0, Vec::len)
    }

    pub fn resolve(&mut self, occasion: SimTime) -> Vec<RaOutcome> {
        self.resolved_through = Some(self.resolved_through.map_or(occasion, |r| r.max(occasion)));
        let slot = self.occasions.remove(&occasion).unwrap_or_default();
        let preambles: Vec<u32> = slot.iter().map(|&(_, p)| p).collect();
        slot.iter()
            .zip(collision_outcomes(&preambles))
            .map(|(&(ue, preamble), success)| RaOutcome {
                ue,
                preamble,
                success,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chan() -> RandomAccessChannel {
        RandomAccessChannel::new(SimTime::from_ms(40), 48)
    }

    #[test]
    fn single_ue_succeeds() {
        let mut ch = chan();
        let (occ, first) = ch.register(ActorId::Ue(0), SimTime::from_ms(5), 17);
        assert!(first);
        assert_eq!(occ, SimTime::from_ms(40));
        let out = ch.resolve(occ);
        assert_eq!(out.len(), 1);
        assert!(out[0].success);
    }

    #[test]
    fn same_preamble_collides() {
        let mut ch = chan();
        let (occ, _) = ch.register(ActorId::Ue(0), SimTime::ZERO, 3);
        let (occ2, first) = ch.register(ActorId::Ue(1), SimTime::ZERO, 3);
        assert_eq!(occ, occ2);
        assert!(!first);
        assert!(ch.resolve(occ).iter().all(|o| !o.success));
    }

    #[test]
    fn resolved_occasion_is_not_reused() {
        let mut ch = chan();
        let (occ, _) = ch.register(ActorId::Ue(0), SimTime::from_ms(40), 1);
        ch.resolve(occ);
        assert_eq!(ch.next_occasion(SimTime::from_ms(40)), SimTime::from_ms(80));
    }

    #[test]
    fn collision_outcomes_examples() {
        assert_eq!(collision_outcomes(&[1, 2, 1, 3]), [false, true, false, true]);
        assert_eq!(collision_outcomes(&[]), Vec::<bool>::new());
    }

    #[test]
    fn preambles_cover_pool_uniformly() {
        let ch = chan();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts = [0u32; 48];
        for _ in 0..48_000 {
            counts[ch.draw_preamble(&mut rng) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (800..1200).contains(&c)));
    }
}
