use std::fmt;

use serde::Serialize;

use crate::crypto::Digest;
use crate::sim::ActorId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    Ul,
    Dl,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Ul => "UL",
            Direction::Dl => "DL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MsgClass {
    Proposal,
    EndorsementResponse,
    OrdererSubmit,
    Confirmation,
    BaselineData,
    BaselineAck,
    Signaling,
}

impl MsgClass {
    pub const ALL: [MsgClass; 7] = [
        MsgClass::Proposal,
        MsgClass::EndorsementResponse,
        MsgClass::OrdererSubmit,
        MsgClass::Confirmation,
        MsgClass::BaselineData,
        MsgClass::BaselineAck,
        MsgClass::Signaling,
    ];

    /// Data classes count towards the UL/DL ratio; signaling does not.
    pub fn is_data(self) -> bool {
        self != MsgClass::Signaling
    }

    pub fn name(self) -> &'static str {
        match self {
            MsgClass::Proposal => "proposal",
            MsgClass::EndorsementResponse => "endorsement_response",
            MsgClass::OrdererSubmit => "orderer_submit",
            MsgClass::Confirmation => "confirmation",
            MsgClass::BaselineData => "baseline_data",
            MsgClass::BaselineAck => "baseline_ack",
            MsgClass::Signaling => "signaling",
        }
    }
}

impl fmt::Display for MsgClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MessageId(pub u64);

/// A message carried over the radio link. `tx` attributes its bytes to a
/// transaction for per-transaction accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadioMessage {
    pub id: MessageId,
    pub direction: Direction,
    pub app_payload_bytes: u32,
    pub header_bytes: u32,
    pub class: MsgClass,
    pub src: ActorId,
    pub dst: ActorId,
    pub tx: Option<Digest>,
}

impl RadioMessage {
    /// Uplink message from a UE.
    pub fn ul(
        id: MessageId,
        ue: ActorId,
        class: MsgClass,
        app_payload_bytes: u32,
        header_bytes: u32,
        tx: Option<Digest>,
    ) -> Self {
        debug_assert!(matches!(ue, ActorId::Ue(_)));
        RadioMessage {
            id,
            direction: Direction::Ul,
            app_payload_bytes,
            header_bytes,
            class,
            src: ue,
            dst: ActorId::Enb,
            tx,
        }
    }

    /// Downlink message towards a UE.
    pub fn dl(
        id: MessageId,
        ue: ActorId,
        class: MsgClass,
        app_payload_bytes: u32,
        header_bytes: u32,
        tx: Option<Digest>,
    ) -> Self {
        debug_assert!(matches!(ue, ActorId::Ue(_)));
        RadioMessage {
            id,
            direction: Direction::Dl,
            app_payload_bytes,
            header_bytes,
            class,
            src: ActorId::Enb,
            dst: ue,
            tx,
        }
    }

    pub fn total_bytes(&self) -> u32 {
        self.app_payload_bytes + self.header_bytes
    }

    /// The UE end of the link.
    pub fn ue(&self) -> ActorId {
        match self.direction {
            Direction::Ul => self.src,
            Direction::Dl => self.dst,
        }
    }
}
