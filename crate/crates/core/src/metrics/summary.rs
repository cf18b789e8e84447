use crate::crypto::Digest;
use crate::scenario::Mode;
use crate::sim::{ActorId, SimTime};

/// Aggregate outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub scenario: String,
    pub seed: u64,
    pub payload_bytes: u32,
    /// Zero in baseline mode.
    pub endorsement_e: u32,
    /// Zero in baseline mode.
    pub block_size_b: u32,
    pub mode: Mode,
    pub ratio_mean: Option<f64>,
    pub ratio_of_totals: Option<f64>,
    pub e2e_mean_s: Option<f64>,
    pub e2e_p95_s: Option<f64>,
    pub generated: u64,
    pub committed: u64,
    pub rejected: u64,
    pub dropped: u64,
    pub ra_failures: u64,
    pub blocks: u64,
    pub alarms: u64,
    pub confirmations: u64,
    pub dl_overflow: u64,
    pub ul_data_bytes: u64,
    pub dl_data_bytes: u64,
    pub signaling_bytes: u64,
}

impl RunSummary {
    /// `committed + rejected + dropped == generated`.
    pub fn accounting_balanced(&self) -> bool {
        self.committed + self.rejected + self.dropped == self.generated
    }
}

/// One row of the per-transaction CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerTxRow {
    pub tx_id: Digest,
    pub ue: ActorId,
    pub t_gen: SimTime,
    pub t_commit: Option<SimTime>,
    pub t_confirm: Option<SimTime>,
    pub ul_bytes: u64,
    pub dl_bytes: u64,
}
