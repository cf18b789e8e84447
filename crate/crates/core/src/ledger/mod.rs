//! Permissioned ledger: endorsement, ordering into blocks, validation and
//! hash-chained commit, world state, the alarm contract and confirmations.

mod block;
mod confirm;
mod contract;
mod dump;
mod membership;
mod orderer;
mod peer;
mod state;
mod tx;

pub use block::{Block, BlockDecodeError, ChainError, CommitResult, Ledger, TxValidity, GENESIS_HASH};
pub use confirm::{ConfirmMode, Confirmation, ConfirmationPolicy, Confirmer};
pub use contract::{evaluate_contract, AlarmEvent, SmartContract};
pub use dump::{dump_block, write_dump};
pub use membership::{select_peers, EndorsementPolicy, Membership};
pub use orderer::{CutBatch, Orderer, OrdererConfig, SubmitOutcome};
pub use peer::{endorse, response_payload_bytes, EndorseResponseMode, Peer};
pub use state::WorldState;
pub use tx::{
    Endorsement, EndorsedTransaction, TransactionProposal, TxPayload, ENDORSEMENT_WIRE_LEN,
    READING_RECORD_LEN,
};

use thiserror::Error;

/// Why a transaction was refused by a peer, the orderer or a committer.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rejection {
    #[error("transaction id already committed")]
    Duplicate,
    #[error("client signature does not verify")]
    BadSignature,
    #[error("malformed proposal")]
    Malformed,
    #[error("fewer valid endorsements than the policy requires")]
    InsufficientEndorsements,
}
