//! Deterministic discrete-event engine.
//!
//! Events are ordered by `(at, seq)` where `seq` is the insertion counter, so
//! simultaneous events run first-in first-out. Every source of randomness is a
//! named stream derived from the run seed; adding draws to one stream never
//! shifts the values another stream produces.

mod actor;
mod engine;
mod rng;
mod time;

pub use actor::ActorId;
pub use engine::{Engine, EventPayload, MetricRecord, RunTrace, SimEvent, TraceEntry};
pub use rng::{RngStreams, StreamId};
pub use time::SimTime;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("event scheduled in the past: at {at} but clock is {now}")]
    ScheduledInPast { at: SimTime, now: SimTime },
    #[error("unknown random stream `{0}`")]
    UnknownStream(String),
}
