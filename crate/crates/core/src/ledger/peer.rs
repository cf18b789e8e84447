use super::{Endorsement, Ledger, Membership, Rejection, TransactionProposal};
use crate::crypto::{KeyPair, DIGEST_LEN, SIGNATURE_LEN};
use crate::sim::ActorId;

/// What an endorsing peer sends back to the client.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EndorseResponseMode {
    /// Proposal digest plus the endorsement signature.
    Digest,
    /// The whole signed proposal echoed back with the endorsement appended.
    FullProposal,
}

/// Application bytes of an endorsement response.
pub fn response_payload_bytes(mode: EndorseResponseMode, proposal: &TransactionProposal) -> u32 {
    match mode {
        EndorseResponseMode::Digest => (DIGEST_LEN + SIGNATURE_LEN) as u32,
        EndorseResponseMode::FullProposal => proposal.wire_len() + SIGNATURE_LEN as u32,
    }
}

#[derive(Debug, Clone)]
pub struct Peer {
    pub id: ActorId,
    pub key: KeyPair,
}

impl Peer {
    pub fn new(index: u32, seed: u64) -> Self {
        let id = ActorId::Peer(index);
        Peer {
            id,
            key: KeyPair::derive(seed, &id.to_string()),
        }
    }
}

/// Simulates the proposal and signs its digest if it is well formed, validly
/// signed by its client and not already on the ledger.
pub fn endorse(
    peer: &Peer,
    proposal: &TransactionProposal,
    membership: &Membership,
    ledger: &Ledger,
) -> Result<Endorsement, Rejection> {
    if membership.key(proposal.client).is_none() || proposal.payload.is_empty() {
        return Err(Rejection::Malformed);
    }
    if !membership.verify_client(proposal) {
        return Err(Rejection::BadSignature);
    }
    if !proposal.tx_id_consistent() {
        return Err(Rejection::Malformed);
    }
    if ledger.is_committed(&proposal.tx_id) {
        return Err(Rejection::Duplicate);
    }
    Ok(Endorsement {
        peer: peer.id,
        signature: peer.key.sign(&proposal.digest().0),
    })
}
