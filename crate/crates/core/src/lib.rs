//! Deterministic discrete-event simulator of an NB-IoT sensor network whose
//! readings are recorded on a permissioned, endorse/order/validate ledger.
//!
//! The crate is organised bottom-up:
//!
//! - [`sim`]: virtual clock, event queue and named random streams.
//! - [`crypto`]: ECDSA signatures (fixed 72-byte wire form) and SHA-256.
//! - [`radio`]: system information, random access with preamble collisions,
//!   and FIFO NPUSCH/PDSCH scheduling.
//! - [`ledger`]: endorsement, ordering, hash-chained commit, world state, the
//!   alarm contract and confirmations.
//! - [`metrics`]: byte accounting, latency records and CSV export.
//! - [`scenario`]: configuration, calibration profiles, the simulation world
//!   and the two experiment sweeps.

pub mod crypto;
pub mod ledger;
pub mod metrics;
pub mod radio;
pub mod scenario;
pub mod sim;

use std::fmt;

/// A configuration value outside its allowed range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub bound: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, bound: impl Into<String>) -> Self {
        Violation {
            field: field.into(),
            bound: bound.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.bound)
    }
}
