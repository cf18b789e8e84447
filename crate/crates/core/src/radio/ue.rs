use std::collections::VecDeque;

use super::{CeLevel, RadioMessage};
use crate::sim::{ActorId, SimTime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RrcState {
    Idle,
    Connected,
}

/// Per-device radio state.
#[derive(Debug, Clone)]
pub struct UeContext {
    pub id: ActorId,
    pub rrc_state: RrcState,
    pub ce_level: CeLevel,
    /// Attempts made in the current access procedure.
    pub ra_attempts: u32,
    /// True between starting an access procedure and its completion.
    pub accessing: bool,
    pub synced: bool,
    pub pending_ul: VecDeque<RadioMessage>,
    /// DL messages held while the UE is idle.
    pub held_dl: VecDeque<RadioMessage>,
    pub held_dl_capacity: usize,
    pub dl_overflow: u64,
    pub cp_ciot_enabled: bool,
    pub cp_ciot_max_bytes: u32,
    /// Set once the CP-CIoT piggyback of the current access has been used.
    pub piggyback_used: bool,
    pub last_activity: SimTime,
    /// UL/DL transfers scheduled but not yet delivered.
    pub in_flight: u32,
}

impl UeContext {
    pub fn new(index: u32, ce_level: CeLevel) -> Self {
        UeContext {
            id: ActorId::Ue(index),
            rrc_state: RrcState::Idle,
            ce_level,
            ra_attempts: 0,
            accessing: false,
            synced: false,
            pending_ul: VecDeque::new(),
            held_dl: VecDeque::new(),
            held_dl_capacity: 16,
            dl_overflow: 0,
            cp_ciot_enabled: false,
            cp_ciot_max_bytes: 100,
            piggyback_used: false,
            last_activity: SimTime::ZERO,
            in_flight: 0,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.rrc_state == RrcState::Connected
    }

    /// Enters connected mode after a successful access procedure.
    pub fn connect(&mut self, at: SimTime) {
        self.rrc_state = RrcState::Connected;
        self.accessing = false;
        self.ra_attempts = 0;
        self.last_activity = at;
    }

    pub fn release(&mut self) {
        self.rrc_state = RrcState::Idle;
        self.piggyback_used = false;
    }

    /// Whether the inactivity timer may release this UE to idle.
    pub fn is_quiescent(&self) -> bool {
        self.in_flight == 0 && self.pending_ul.is_empty() && !self.accessing
    }
}
