use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Write as _;
use std::io::{self, Write};

use rand_chacha::ChaCha8Rng;

use super::{ActorId, RngStreams, SimError, SimTime};

/// Implemented by event payloads so the engine can label trace entries.
pub trait EventPayload {
    fn kind(&self) -> &'static str;

    fn detail(&self) -> String {
        String::new()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimEvent<P> {
    pub at: SimTime,
    pub seq: u64,
    pub target: ActorId,
    pub payload: P,
}

struct Queued<P>(SimEvent<P>);

impl<P> Queued<P> {
    fn key(&self) -> (SimTime, u64) {
        (self.0.at, self.0.seq)
    }
}

impl<P> PartialEq for Queued<P> {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl<P> Eq for Queued<P> {}

impl<P> PartialOrd for Queued<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<P> Ord for Queued<P> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// A measurement emitted by the model while handling an event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricRecord {
    pub at: SimTime,
    pub actor: ActorId,
    pub name: &'static str,
    pub value: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEntry {
    Event {
        at: SimTime,
        seq: u64,
        target: ActorId,
        kind: &'static str,
        detail: String,
    },
    Metric(MetricRecord),
}

impl TraceEntry {
    pub fn at(&self) -> SimTime {
        match self {
            TraceEntry::Event { at, .. } => *at,
            TraceEntry::Metric(m) => m.at,
        }
    }
}

/// Executed events and emitted metrics, in execution order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunTrace {
    pub entries: Vec<TraceEntry>,
}

impl RunTrace {
    pub fn events(&self) -> impl Iterator<Item = &TraceEntry> {
        self.entries
            .iter()
            .filter(|e| matches!(e, TraceEntry::Event { .. }))
    }

    pub fn metrics(&self) -> impl Iterator<Item = &MetricRecord> {
        self.entries.iter().filter_map(|e| match e {
            TraceEntry::Metric(m) => Some(m),
            TraceEntry::Event { .. } => None,
        })
    }

    /// Sum of `value` over all metric records with the given name.
    pub fn metric_sum(&self, name: &str) -> u64 {
        self.metrics()
            .filter(|m| m.name == name)
            .map(|m| m.value)
            .sum()
    }

    /// Writes `time_us,actor,kind,detail` lines.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "time_us,actor,kind,detail")?;
        for e in &self.entries {
            match e {
                TraceEntry::Event {
                    at,
                    seq,
                    target,
                    kind,
                    detail,
                } => {
                    let mut d = format!("seq={seq}");
                    if !detail.is_empty() {
                        let _ = write!(d, " {detail}");
                    }
                    writeln!(w, "{},{},{},{}", at.as_us(), target, kind, d)?;
                }
                TraceEntry::Metric(m) => {
                    let mut d = format!("value={}", m.value);
                    if !m.detail.is_empty() {
                        let _ = write!(d, " {}", m.detail);
                    }
                    writeln!(w, "{},{},{},{}", m.at.as_us(), m.actor, m.name, d)?;
                }
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }
}

/// Single-threaded event engine with a virtual clock.
pub struct Engine<P> {
    clock: SimTime,
    next_seq: u64,
    queue: BinaryHeap<Reverse<Queued<P>>>,
    rng: RngStreams,
    trace: RunTrace,
}

impl<P: EventPayload> Engine<P> {
    pub fn new<'a>(seed: u64, streams: impl IntoIterator<Item = &'a str>) -> Self {
        Engine {
            clock: SimTime::ZERO,
            next_seq: 0,
            queue: BinaryHeap::new(),
            rng: RngStreams::new(seed, streams),
            trace: RunTrace::default(),
        }
    }

    pub fn now(&self) -> SimTime {
        self.clock
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    /// Enqueues an event and returns its sequence number.
    pub fn schedule(&mut self, at: SimTime, target: ActorId, payload: P) -> Result<u64, SimError> {
        if at < self.clock {
            return Err(SimError::ScheduledInPast {
                at,
                now: self.clock,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.queue.push(Reverse(Queued(SimEvent {
            at,
            seq,
            target,
            payload,
        })));
        Ok(seq)
    }

    pub fn schedule_in(&mut self, delay: SimTime, target: ActorId, payload: P) -> u64 {
        self.schedule(self.clock + delay, target, payload)
            .expect("a non-negative delay is never in the past")
    }

    fn pop_until(&mut self, t_end: SimTime) -> Option<SimEvent<P>> {
        match self.queue.peek() {
            Some(Reverse(q)) if q.0.at <= t_end => {}
            _ => return None,
        }
        let Reverse(Queued(ev)) = self.queue.pop()?;
        debug_assert!(ev.at >= self.clock);
        self.clock = ev.at;
        self.trace.entries.push(TraceEntry::Event {
            at: ev.at,
            seq: ev.seq,
            target: ev.target,
            kind: ev.payload.kind(),
            detail: ev.payload.detail(),
        });
        Some(ev)
    }

    /// Executes every event with `at <= t_end` in `(at, seq)` order, then
    /// advances the clock to `t_end`.
    pub fn run_until<E, F>(&mut self, t_end: SimTime, mut handler: F) -> Result<(), E>
    where
        F: FnMut(&mut Self, SimEvent<P>) -> Result<(), E>,
    {
        while let Some(ev) = self.pop_until(t_end) {
            handler(self, ev)?;
        }
        if t_end > self.clock {
            self.clock = t_end;
        }
        Ok(())
    }

    /// Executes events until the queue is empty. The clock stays at the time
    /// of the last executed event.
    pub fn run<E, F>(&mut self, mut handler: F) -> Result<(), E>
    where
        F: FnMut(&mut Self, SimEvent<P>) -> Result<(), E>,
    {
        while let Some(ev) = self.pop_until(SimTime::MAX) {
            handler(self, ev)?;
        }
        Ok(())
    }

    pub fn next_random(&mut self, stream: &str) -> Result<f64, SimError> {
        self.rng.next_random(stream)
    }

    pub fn rng(&mut self, stream: &str) -> Result<&mut ChaCha8Rng, SimError> {
        self.rng.stream(stream)
    }

    pub fn record(&mut self, actor: ActorId, name: &'static str, value: u64, detail: String) {
        self.trace.entries.push(TraceEntry::Metric(MetricRecord {
            at: self.clock,
            actor,
            name,
            value,
            detail,
        }));
    }

    pub fn trace(&self) -> &RunTrace {
        &self.trace
    }

    pub fn into_trace(self) -> RunTrace {
        self.trace
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    struct Tag(&'static str);

    impl EventPayload for Tag {
        fn kind(&self) -> &'static str {
            self.0
        }
    }

    fn engine() -> Engine<Tag> {
        Engine::new(1, ["a"])
    }

    fn kinds(trace: &RunTrace) -> Vec<&'static str> {
        trace
            .events()
            .map(|e| match e {
                TraceEntry::Event { kind, .. } => *kind,
                _ => unreachable!(),
            })
            .collect()
    }

    fn noop(_: &mut Engine<Tag>, _: SimEvent<Tag>) -> Result<(), ()> {
        Ok(())
    }

    #[test]
    fn schedule_at_clock_accepted() {
        let mut e = engine();
        e.schedule(SimTime::ZERO, ActorId::Enb, Tag("x")).unwrap();
        assert_eq!(e.pending(), 1);
    }

    #[test]
    fn schedule_in_past_rejected() {
        let mut e = engine();
        e.schedule(SimTime::from_us(5), ActorId::Enb, Tag("x")).unwrap();
        e.run_until(SimTime::from_us(5), noop).unwrap();
        let err = e.schedule(SimTime::from_us(4), ActorId::Enb, Tag("y"));
        assert!(matches!(err, Err(SimError::ScheduledInPast { .. })));
    }

    #[test]
    fn dequeues_by_time() {
        let mut e = engine();
        e.schedule(SimTime::from_us(5), ActorId::Enb, Tag("five")).unwrap();
        e.schedule(SimTime::from_us(3), ActorId::Enb, Tag("three")).unwrap();
        e.run_until(SimTime::from_us(10), noop).unwrap();
        assert_eq!(kinds(e.trace()), ["three", "five"]);
    }

    #[test]
    fn ties_break_fifo() {
        let mut e = engine();
        e.schedule(SimTime::from_us(7), ActorId::Enb, Tag("A")).unwrap();
        e.schedule(SimTime::from_us(7), ActorId::Enb, Tag("B")).unwrap();
        e.run_until(SimTime::from_us(7), noop).unwrap();
        assert_eq!(kinds(e.trace()), ["A", "B"]);
    }

    #[test]
    fn empty_queue_advances_clock() {
        let mut e = engine();
        e.run_until(SimTime::from_us(1_000_000), noop).unwrap();
        assert!(e.trace().entries.is_empty());
        assert_eq!(e.now(), SimTime::from_us(1_000_000));
    }

    #[test]
    fn horizon_is_inclusive() {
        let mut e = engine();
        for (t, k) in [(1, "1"), (2, "2"), (3, "3")] {
            e.schedule(SimTime::from_us(t), ActorId::Enb, Tag(k)).unwrap();
        }
        e.run_until(SimTime::from_us(2), noop).unwrap();
        assert_eq!(kinds(e.trace()), ["1", "2"]);
        assert_eq!(e.now(), SimTime::from_us(2));
        assert_eq!(e.pending(), 1);
    }

    #[test]
    fn handler_can_schedule_follow_ups() {
        let mut e = engine();
        e.schedule(SimTime::ZERO, ActorId::Enb, Tag("start")).unwrap();
        let mut n = 0;
        e.run(|eng, ev| {
            if ev.payload.0 == "start" {
                eng.schedule_in(SimTime::from_us(10), ActorId::Enb, Tag("next"));
            }
            n += 1;
            Ok::<_, ()>(())
        })
        .unwrap();
        assert_eq!(n, 2);
        assert_eq!(e.now(), SimTime::from_us(10));
    }

    fn random_run(seed: u64) -> Vec<u8> {
        let mut e: Engine<Tag> = Engine::new(seed, ["a"]);
        e.schedule(SimTime::ZERO, ActorId::Enb, Tag("tick")).unwrap();
        let mut left = 200;
        e.run(|eng, _| {
            let gap = (eng.next_random("a").unwrap() * 1000.0) as u64;
            eng.record(ActorId::Enb, "gap", gap, String::new());
            left -= 1;
            if left > 0 {
                eng.schedule_in(SimTime::from_us(gap), ActorId::Ue(0), Tag("tick"));
            }
            Ok::<_, ()>(())
        })
        .unwrap();
        e.into_trace().to_bytes()
    }

    #[test]
    fn replay_is_byte_identical() {
        assert_eq!(random_run(11), random_run(11));
        assert_ne!(random_run(11), random_run(12));
    }
}
