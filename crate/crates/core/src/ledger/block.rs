use std::collections::HashSet;

use thiserror::Error;

use super::{
    EndorsedTransaction, Endorsement, EndorsementPolicy, Membership, Rejection, SmartContract,
    AlarmEvent, TransactionProposal, TxPayload, WorldState,
};
use crate::crypto::{digest, Digest, Signature, DIGEST_LEN, SIGNATURE_LEN};
use crate::sim::{ActorId, SimTime};

/// `prev_hash` of the first block.
pub const GENESIS_HASH: Digest = Digest::ZERO;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub height: u64,
    pub prev_hash: Digest,
    pub txs: Vec<EndorsedTransaction>,
    pub block_hash: Digest,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockDecodeError {
    #[error("truncated block encoding")]
    Truncated,
    #[error("{0} trailing bytes after block")]
    Trailing(usize),
    #[error("invalid actor id")]
    BadActor,
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], BlockDecodeError> {
        if self.buf.len() < n {
            return Err(BlockDecodeError::Truncated);
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Ok(head)
    }

    fn u16(&mut self) -> Result<u16, BlockDecodeError> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, BlockDecodeError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, BlockDecodeError> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn digest(&mut self) -> Result<Digest, BlockDecodeError> {
        Ok(Digest(self.take(DIGEST_LEN)?.try_into().unwrap()))
    }

    fn sig(&mut self) -> Result<Signature, BlockDecodeError> {
        Ok(Signature(self.take(SIGNATURE_LEN)?.try_into().unwrap()))
    }

    fn actor(&mut self) -> Result<ActorId, BlockDecodeError> {
        ActorId::from_bytes(self.take(5)?.try_into().unwrap()).ok_or(BlockDecodeError::BadActor)
    }
}

fn encode_tx(out: &mut Vec<u8>, etx: &EndorsedTransaction) {
    let p = &etx.proposal;
    out.extend_from_slice(&p.signing_bytes());
    out.extend_from_slice(&p.client_sig.0);
    out.extend_from_slice(&(etx.endorsements.len() as u16).to_be_bytes());
    for e in &etx.endorsements {
        out.extend_from_slice(&e.peer.to_bytes());
        out.extend_from_slice(&e.signature.0);
    }
}

fn decode_tx(r: &mut Reader<'_>) -> Result<EndorsedTransaction, BlockDecodeError> {
    let tx_id = r.digest()?;
    let client = r.actor()?;
    let timestamp = SimTime::from_us(r.u64()?);
    let nonce = r.u64()?;
    let len = r.u32()? as usize;
    let payload = r.take(len)?.to_vec();
    let client_sig = r.sig()?;
    let n = r.u16()?;
    let mut endorsements = Vec::with_capacity(n as usize);
    for _ in 0..n {
        endorsements.push(Endorsement {
            peer: r.actor()?,
            signature: r.sig()?,
        });
    }
    Ok(EndorsedTransaction {
        proposal: TransactionProposal {
            tx_id,
            client,
            payload,
            timestamp,
            nonce,
            client_sig,
        },
        endorsements,
    })
}

impl Block {
    pub fn new(height: u64, prev_hash: Digest, txs: Vec<EndorsedTransaction>) -> Self {
        let mut b = Block {
            height,
            prev_hash,
            txs,
            block_hash: Digest::ZERO,
        };
        b.block_hash = b.compute_hash();
        b
    }

    fn content_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.height.to_be_bytes());
        out.extend_from_slice(&self.prev_hash.0);
        out.extend_from_slice(&(self.txs.len() as u32).to_be_bytes());
        for t in &self.txs {
            encode_tx(&mut out, t);
        }
        out
    }

    pub fn compute_hash(&self) -> Digest {
        digest(&self.content_bytes())
    }

    /// Stored form: content followed by the block hash.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = self.content_bytes();
        out.extend_from_slice(&self.block_hash.0);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Block, BlockDecodeError> {
        let mut r = Reader { buf: bytes };
        let height = r.u64()?;
        let prev_hash = r.digest()?;
        let n = r.u32()?;
        // Each transaction needs well over 64 bytes; reject absurd counts early.
        if n as usize > bytes.len() / 64 {
            return Err(BlockDecodeError::Truncated);
        }
        let mut txs = Vec::with_capacity(n as usize);
        for _ in 0..n {
            txs.push(decode_tx(&mut r)?);
        }
        let block_hash = r.digest()?;
        if !r.buf.is_empty() {
            return Err(BlockDecodeError::Trailing(r.buf.len()));
        }
        Ok(Block {
            height,
            prev_hash,
            txs,
            block_hash,
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("block {height}: prev_hash does not match the chain tip")]
    PrevHashMismatch { height: u64 },
    #[error("block {height}: stored hash does not match its content")]
    HashMismatch { height: u64 },
    #[error("block {height}: expected height {expected}")]
    HeightMismatch { height: u64, expected: u64 },
    #[error("block {height}: empty block")]
    Empty { height: u64 },
    #[error("block #{index}: {source}")]
    Decode {
        index: usize,
        #[source]
        source: BlockDecodeError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TxValidity {
    Valid,
    Invalid(Rejection),
}

/// Outcome of committing one block.
#[derive(Debug, Clone, Default)]
pub struct CommitResult {
    pub validity: Vec<TxValidity>,
    /// `(tx_id, client)` of valid transactions, in block order.
    pub committed: Vec<(Digest, ActorId)>,
    pub alarms: Vec<AlarmEvent>,
}

/// The replicated ledger as seen by a committing peer.
#[derive(Debug)]
pub struct Ledger {
    blocks: Vec<Block>,
    validity: Vec<Vec<TxValidity>>,
    committed: HashSet<Digest>,
    pub state: WorldState,
    pub contract: SmartContract,
}

impl Ledger {
    pub fn new(contract: SmartContract) -> Self {
        Ledger {
            blocks: Vec::new(),
            validity: Vec::new(),
            committed: HashSet::new(),
            state: WorldState::default(),
            contract,
        }
    }

    pub fn height(&self) -> u64 {
        self.blocks.last().map_or(0, |b| b.height)
    }

    pub fn tip_hash(&self) -> Digest {
        self.blocks.last().map_or(GENESIS_HASH, |b| b.block_hash)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn validity(&self, height: u64) -> Option<&[TxValidity]> {
        self.validity.get(height.checked_sub(1)? as usize).map(Vec::as_slice)
    }

    pub fn is_committed(&self, tx_id: &Digest) -> bool {
        self.committed.contains(tx_id)
    }

    pub fn committed_count(&self) -> usize {
        self.committed.len()
    }

    /// Re-validates every transaction, appends the block and applies the
    /// valid ones to the world state. A broken chain link aborts with the
    /// ledger unchanged.
    pub fn validate_and_commit(
        &mut self,
        block: Block,
        policy: &EndorsementPolicy,
        membership: &Membership,
    ) -> Result<CommitResult, ChainError> {
        let expected = self.height() + 1;
        if block.height != expected {
            return Err(ChainError::HeightMismatch {
                height: block.height,
                expected,
            });
        }
        if block.prev_hash != self.tip_hash() {
            return Err(ChainError::PrevHashMismatch {
                height: block.height,
            });
        }
        if block.compute_hash() != block.block_hash {
            return Err(ChainError::HashMismatch {
                height: block.height,
            });
        }
        if block.txs.is_empty() {
            return Err(ChainError::Empty {
                height: block.height,
            });
        }
        let mut result = CommitResult::default();
        for etx in &block.txs {
            let v = match membership.check_policy(etx, policy) {
                Err(r) => TxValidity::Invalid(r),
                Ok(()) if !etx.proposal.tx_id_consistent() => TxValidity::Invalid(Rejection::Malformed),
                Ok(()) if !self.committed.insert(etx.tx_id()) => TxValidity::Invalid(Rejection::Duplicate),
                Ok(()) => TxValidity::Valid,
            };
            if v == TxValidity::Valid {
                result.committed.push((etx.tx_id(), etx.proposal.client));
                self.apply(etx, &mut result.alarms);
            }
            result.validity.push(v);
        }
        self.validity.push(result.validity.clone());
        self.blocks.push(block);
        Ok(result)
    }

    fn apply(&mut self, etx: &EndorsedTransaction, alarms: &mut Vec<AlarmEvent>) {
        match TxPayload::decode(&etx.proposal.payload) {
            Some(TxPayload::Reading { sensor, ppm, .. }) => {
                let id = ActorId::Ue(sensor);
                self.state.put(format!("reading/{id}"), f64::from(ppm));
                let (mean, alarm) = self.contract.observe(id, ppm);
                self.state.put(format!("avg/{id}"), mean);
                alarms.extend(alarm);
            }
            Some(TxPayload::Alarm { sensor, mean_mppm }) => {
                let id = ActorId::Ue(sensor);
                self.state.put(format!("alarm/{id}"), mean_mppm as f64 / 1000.0);
            }
            None => {
                self.state
                    .put(format!("raw/{}", etx.proposal.client), etx.proposal.payload.len() as f64);
            }
        }
    }

    /// Recomputes every hash and link from genesis.
    pub fn verify_chain(&self) -> Result<(), ChainError> {
        verify_blocks(self.blocks.iter())
    }

    pub fn encoded_blocks(&self) -> Vec<Vec<u8>> {
        self.blocks.iter().map(Block::encode).collect()
    }

    /// Verifies a chain given in stored (encoded) form.
    pub fn verify_encoded(blocks: &[Vec<u8>]) -> Result<(), ChainError> {
        let decoded = blocks
            .iter()
            .enumerate()
            .map(|(index, b)| Block::decode(b).map_err(|source| ChainError::Decode { index, source }))
            .collect::<Result<Vec<_>, _>>()?;
        verify_blocks(decoded.iter())
    }
}

fn verify_blocks<'a>(blocks: impl Iterator<Item = &'a Block>) -> Result<(), ChainError> {
    let mut tip = GENESIS_HASH;
    for (i, b) in blocks.enumerate() {
        let expected = i as u64 + 1;
        if b.height != expected {
            return Err(ChainError::HeightMismatch {
                height: b.height,
                expected,
            });
        }
        if b.prev_hash != tip {
            return Err(ChainError::PrevHashMismatch { height: b.height });
        }
        if b.compute_hash() != b.block_hash {
            return Err(ChainError::HashMismatch { height: b.height });
        }
        if b.txs.is_empty() {
            return Err(ChainError::Empty { height: b.height });
        }
        tip = b.block_hash;
    }
    Ok(())
}
