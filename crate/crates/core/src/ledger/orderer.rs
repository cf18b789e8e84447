use std::collections::VecDeque;

use super::{Block, EndorsedTransaction, EndorsementPolicy, Membership, Rejection, GENESIS_HASH};
use crate::crypto::Digest;
use crate::sim::SimTime;
use crate::Violation;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OrdererConfig {
    pub block_size_b: u32,
    pub batch_timeout: SimTime,
    pub block_proc_base: SimTime,
    pub block_proc_per_tx: SimTime,
}

impl Default for OrdererConfig {
    fn default() -> Self {
        OrdererConfig {
            block_size_b: 30,
            batch_timeout: SimTime::from_secs(2),
            block_proc_base: SimTime::from_ms(50),
            block_proc_per_tx: SimTime::from_ms(10),
        }
    }
}

impl OrdererConfig {
    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.block_size_b < 1 {
            v.push(Violation::new("ledger.block_size", "must be >= 1"));
        }
        if self.batch_timeout == SimTime::ZERO {
            v.push(Violation::new("profile.batch_timeout_ms", "must be > 0"));
        }
        v
    }

    /// Time from cutting a block of `n` transactions until it is ready.
    pub fn processing_time(&self, n: usize) -> SimTime {
        self.block_proc_base + self.block_proc_per_tx * n as u64
    }
}

/// Result of an accepted submission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubmitOutcome {
    /// The batch reached `b`; cut now.
    BatchFull,
    /// First transaction of a new batch: arm the timeout for this epoch.
    BatchOpened { epoch: u64, deadline: SimTime },
    Queued,
}

/// A cut block and when it is ready for delivery to committers.
#[derive(Debug, Clone)]
pub struct CutBatch {
    pub block: Block,
    pub cut_at: SimTime,
    pub ready_at: SimTime,
}

/// Single logical ordering service.
#[derive(Debug)]
pub struct Orderer {
    pub cfg: OrdererConfig,
    pending: VecDeque<(EndorsedTransaction, SimTime)>,
    epoch: u64,
    next_height: u64,
    tip: Digest,
    pub accepted: u64,
    pub rejected: u64,
}

impl Orderer {
    pub fn new(cfg: OrdererConfig) -> Self {
        Orderer {
            cfg,
            pending: VecDeque::new(),
            epoch: 0,
            next_height: 1,
            tip: GENESIS_HASH,
            accepted: 0,
            rejected: 0,
        }
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    /// Current batch epoch; a timeout armed for an older epoch is stale.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn oldest_arrival(&self) -> Option<SimTime> {
        self.pending.front().map(|(_, t)| *t)
    }

    /// Accepts the envelope iff it carries enough valid endorsements.
    pub fn submit(
        &mut self,
        etx: EndorsedTransaction,
        now: SimTime,
        policy: &EndorsementPolicy,
        membership: &Membership,
    ) -> Result<SubmitOutcome, Rejection> {
        if let Err(r) = membership.check_policy(&etx, policy) {
            self.rejected += 1;
            return Err(r);
        }
        self.accepted += 1;
        self.pending.push_back((etx, now));
        if self.pending.len() >= self.cfg.block_size_b as usize {
            Ok(SubmitOutcome::BatchFull)
        } else if self.pending.len() == 1 {
            Ok(SubmitOutcome::BatchOpened {
                epoch: self.epoch,
                deadline: now + self.cfg.batch_timeout,
            })
        } else {
            Ok(SubmitOutcome::Queued)
        }
    }

    /// Cuts a block if the batch is full or its oldest transaction has
    /// waited `batch_timeout`.
    pub fn cut_block(&mut self, now: SimTime) -> Option<CutBatch> {
        let oldest = self.oldest_arrival()?;
        let full = self.pending.len() >= self.cfg.block_size_b as usize;
        let expired = now >= oldest + self.cfg.batch_timeout;
        if !full && !expired {
            return None;
        }
        let n = self.pending.len().min(self.cfg.block_size_b as usize);
        let txs: Vec<EndorsedTransaction> = self.pending.drain(..n).map(|(t, _)| t).collect();
        let block = Block::new(self.next_height, self.tip, txs);
        self.next_height += 1;
        self.tip = block.block_hash;
        self.epoch += 1;
        let ready_at = now + self.cfg.processing_time(block.txs.len());
        Some(CutBatch {
            block,
            cut_at: now,
            ready_at,
        })
    }
}
