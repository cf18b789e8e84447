//! NB-IoT access and transmission: system-information acquisition, contention
//! based random access, and FIFO scheduling of the shared NPUSCH/PDSCH
//! carriers.

mod access;
mod cell;
mod config;
mod message;
mod timing;
mod ue;

pub use access::{collision_outcomes, RaOutcome, RandomAccessChannel};
pub use cell::{Cell, CellError, DlOutcome, SharedCarrier};
pub use config::{CeLevel, CellConfig, TimingModel};
pub use message::{Direction, MessageId, MsgClass, RadioMessage};
pub use timing::{acquire_system_info, dl_duration, ul_duration};
pub use ue::{RrcState, UeContext};

use thiserror::Error;

use crate::sim::ActorId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RadioError {
    #[error("{ue} tried to send UL data while idle")]
    UlWhileIdle { ue: ActorId },
    #[error("{ue} piggyback of {bytes} B exceeds the CP-CIoT limit of {limit} B")]
    PiggybackTooLarge { ue: ActorId, bytes: u32, limit: u32 },
    #[error("{ue} already used its CP-CIoT piggyback in this access")]
    PiggybackUsed { ue: ActorId },
    #[error("message {id:?} has direction {direction:?}, expected {expected:?}")]
    WrongDirection {
        id: MessageId,
        direction: Direction,
        expected: Direction,
    },
}
