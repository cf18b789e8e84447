//! Traffic accounting, latency records and run summaries.

mod export;
mod latency;
mod summary;
mod traffic;

pub use export::{
    export_csv, read_summary_csv, write_per_tx_csv, write_summary_csv, PER_TX_HEADER,
    SUMMARY_HEADER,
};
pub use latency::{e2e_stats, percentile_nearest_rank, E2eStats, HistBin, LatencyRecord};
pub use summary::{PerTxRow, RunSummary};
pub use traffic::{ClassCounter, TrafficLedger, TxBytes};

use thiserror::Error;

use crate::radio::MessageId;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("message {0:?} recorded twice")]
    DuplicateRecord(MessageId),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
