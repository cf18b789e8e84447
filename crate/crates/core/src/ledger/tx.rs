use crate::crypto::{digest, digest_parts, Digest, KeyPair, Signature, SIGNATURE_LEN};
use crate::sim::{ActorId, SimTime};

/// Bytes a single endorsement occupies inside a transaction envelope.
pub const ENDORSEMENT_WIRE_LEN: usize = 5 + SIGNATURE_LEN;

/// Smallest payload able to carry a sensor reading record.
pub const READING_RECORD_LEN: usize = 13;

/// Application content carried in a transaction payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TxPayload {
    Reading { sensor: u32, seq: u32, ppm: u32 },
    /// Emitted by the alarm contract; `mean_mppm` is the window mean in
    /// milli-ppm.
    Alarm { sensor: u32, mean_mppm: u64 },
}

impl TxPayload {
    /// Encodes the record, zero-padded to `len` bytes.
    pub fn encode(&self, len: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(len.max(READING_RECORD_LEN));
        match *self {
            TxPayload::Reading { sensor, seq, ppm } => {
                out.push(1);
                out.extend_from_slice(&sensor.to_be_bytes());
                out.extend_from_slice(&seq.to_be_bytes());
                out.extend_from_slice(&ppm.to_be_bytes());
            }
            TxPayload::Alarm { sensor, mean_mppm } => {
                out.push(2);
                out.extend_from_slice(&sensor.to_be_bytes());
                out.extend_from_slice(&mean_mppm.to_be_bytes());
            }
        }
        out.resize(len.max(out.len()), 0);
        out
    }

    pub fn decode(bytes: &[u8]) -> Option<TxPayload> {
        let u32_at = |i: usize| Some(u32::from_be_bytes(bytes.get(i..i + 4)?.try_into().ok()?));
        match bytes.first()? {
            1 => Some(TxPayload::Reading {
                sensor: u32_at(1)?,
                seq: u32_at(5)?,
                ppm: u32_at(9)?,
            }),
            2 => Some(TxPayload::Alarm {
                sensor: u32_at(1)?,
                mean_mppm: u64::from_be_bytes(bytes.get(5..13)?.try_into().ok()?),
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionProposal {
    pub tx_id: Digest,
    pub client: ActorId,
    pub payload: Vec<u8>,
    pub timestamp: SimTime,
    pub nonce: u64,
    pub client_sig: Signature,
}

impl TransactionProposal {
    pub fn compute_tx_id(client: ActorId, timestamp: SimTime, nonce: u64, payload: &[u8]) -> Digest {
        digest_parts([
            client.to_bytes().as_slice(),
            &timestamp.as_us().to_be_bytes(),
            &nonce.to_be_bytes(),
            payload,
        ])
    }

    pub fn new_signed(
        client: ActorId,
        payload: Vec<u8>,
        timestamp: SimTime,
        nonce: u64,
        key: &KeyPair,
    ) -> Self {
        let tx_id = Self::compute_tx_id(client, timestamp, nonce, &payload);
        let mut p = TransactionProposal {
            tx_id,
            client,
            payload,
            timestamp,
            nonce,
            client_sig: Signature([0; SIGNATURE_LEN]),
        };
        p.client_sig = key.sign(&p.signing_bytes());
        p
    }

    /// Bytes covered by the client signature.
    pub fn signing_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(32 + 5 + 8 + 8 + 4 + self.payload.len());
        out.extend_from_slice(&self.tx_id.0);
        out.extend_from_slice(&self.client.to_bytes());
        out.extend_from_slice(&self.timestamp.as_us().to_be_bytes());
        out.extend_from_slice(&self.nonce.to_be_bytes());
        out.extend_from_slice(&(self.payload.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    /// Digest of the signed proposal; this is what endorsers sign.
    pub fn digest(&self) -> Digest {
        let mut b = self.signing_bytes();
        b.extend_from_slice(&self.client_sig.0);
        digest(&b)
    }

    /// Application bytes on the radio link: payload plus client signature.
    pub fn wire_len(&self) -> u32 {
        (self.payload.len() + SIGNATURE_LEN) as u32
    }

    pub fn tx_id_consistent(&self) -> bool {
        self.tx_id == Self::compute_tx_id(self.client, self.timestamp, self.nonce, &self.payload)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Endorsement {
    pub peer: ActorId,
    pub signature: Signature,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndorsedTransaction {
    pub proposal: TransactionProposal,
    pub endorsements: Vec<Endorsement>,
}

impl EndorsedTransaction {
    pub fn tx_id(&self) -> Digest {
        self.proposal.tx_id
    }

    /// Envelope size on the radio link.
    pub fn wire_len(&self) -> u32 {
        self.proposal.wire_len() + (self.endorsements.len() * SIGNATURE_LEN) as u32
    }

    pub fn endorsers(&self) -> Vec<ActorId> {
        self.endorsements.iter().map(|e| e.peer).collect()
    }
}
