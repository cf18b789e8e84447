use serde::Serialize;

use crate::ledger::EndorseResponseMode;
use crate::sim::SimTime;

/// Constants that absorb the protocol-stack and infrastructure overheads a
/// testbed measures but does not itemise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationProfile {
    pub name: String,
    /// Per-message header bytes on UL data messages.
    pub header_bytes_ul: u32,
    /// Per-message header bytes on DL data messages.
    pub header_bytes_dl: u32,
    /// Extra bytes carried by each endorsement response (endorser identity
    /// and response envelope).
    pub response_extra_bytes: u32,
    /// One-way delay between the eNB side and any ledger node.
    pub backhaul_delay: SimTime,
    pub endorse_service: SimTime,
    /// NAS/bearer setup after the random-access handshake.
    pub connected_setup: SimTime,
    pub block_proc_base: SimTime,
    pub block_proc_per_tx: SimTime,
    pub batch_timeout: SimTime,
    pub endorse_response: EndorseResponseMode,
    /// Idle time after which a connected UE is released.
    pub inactivity_timer: SimTime,
}

impl Default for CalibrationProfile {
    fn default() -> Self {
        CalibrationProfile {
            name: "default".into(),
            header_bytes_ul: 60,
            header_bytes_dl: 60,
            response_extra_bytes: 0,
            backhaul_delay: SimTime::from_ms(10),
            endorse_service: SimTime::from_ms(5),
            connected_setup: SimTime::from_ms(100),
            block_proc_base: SimTime::from_ms(50),
            block_proc_per_tx: SimTime::from_ms(10),
            batch_timeout: SimTime::from_secs(2),
            endorse_response: EndorseResponseMode::Digest,
            inactivity_timer: SimTime::from_secs(20),
        }
    }
}

pub const PROFILE_NAMES: [&str; 3] = ["default", "fig5", "fig6"];

impl CalibrationProfile {
    /// Traffic-ratio profile. `response_extra_bytes` was fitted by
    /// `examples/calibrate.rs` so that P=50 B, E=2 gives a UL/DL ratio of 0.5.
    pub fn fig5() -> Self {
        CalibrationProfile {
            name: "fig5".into(),
            endorse_response: EndorseResponseMode::FullProposal,
            response_extra_bytes: 208,
            ..CalibrationProfile::default()
        }
    }

    /// Latency profile. UEs are released between reports, so each report
    /// pays random access and connection setup. `connected_setup` and
    /// `batch_timeout` were fitted by `examples/calibrate.rs` against a
    /// 0.832 s baseline mean and a 1.63 s mean at b=100.
    pub fn fig6() -> Self {
        CalibrationProfile {
            name: "fig6".into(),
            inactivity_timer: SimTime::from_secs(5),
            connected_setup: SimTime::from_ms(740),
            batch_timeout: SimTime::from_ms(580),
            ..CalibrationProfile::default()
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default()),
            "fig5" => Some(Self::fig5()),
            "fig6" => Some(Self::fig6()),
            _ => None,
        }
    }
}
