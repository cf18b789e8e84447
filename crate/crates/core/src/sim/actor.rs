use std::fmt;

use serde::Serialize;

/// Identifies a simulated actor. Ordering is used for deterministic iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ActorId {
    Ue(u32),
    Enb,
    Peer(u32),
    Orderer,
    Server,
    Contract,
}

impl ActorId {
    /// Stable byte encoding used inside signed and hashed structures.
    pub fn to_bytes(self) -> [u8; 5] {
        let (tag, idx) = match self {
            ActorId::Ue(i) => (1u8, i),
            ActorId::Enb => (2, 0),
            ActorId::Peer(i) => (3, i),
            ActorId::Orderer => (4, 0),
            ActorId::Server => (5, 0),
            ActorId::Contract => (6, 0),
        };
        let mut out = [0u8; 5];
        out[0] = tag;
        out[1..].copy_from_slice(&idx.to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: [u8; 5]) -> Option<ActorId> {
        let idx = u32::from_be_bytes([bytes[1], bytes[2], bytes[3], bytes[4]]);
        let id = match (bytes[0], idx) {
            (1, i) => ActorId::Ue(i),
            (2, 0) => ActorId::Enb,
            (3, i) => ActorId::Peer(i),
            (4, 0) => ActorId::Orderer,
            (5, 0) => ActorId::Server,
            (6, 0) => ActorId::Contract,
            _ => return None,
        };
        Some(id)
    }
}

impl fmt::Display for ActorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActorId::Ue(i) => write!(f, "ue{i}"),
            ActorId::Enb => f.write_str("enb"),
            ActorId::Peer(i) => write!(f, "peer{i}"),
            ActorId::Orderer => f.write_str("orderer"),
            ActorId::Server => f.write_str("server"),
            ActorId::Contract => f.write_str("contract"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_roundtrip() {
        for id in [
            ActorId::Ue(7),
            ActorId::Enb,
            ActorId::Peer(3),
            ActorId::Orderer,
            ActorId::Server,
            ActorId::Contract,
        ] {
            assert_eq!(ActorId::from_bytes(id.to_bytes()), Some(id));
        }
        assert_eq!(ActorId::from_bytes([9, 0, 0, 0, 0]), None);
    }
}
