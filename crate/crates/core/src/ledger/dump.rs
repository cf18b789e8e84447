use std::io::{self, Write};

use serde::Serialize;

use super::Block;
use crate::crypto::Digest;

#[derive(Serialize)]
struct TxLine {
    tx_id: Digest,
    client: String,
    ts: u64,
    payload_size: usize,
    endorsers: Vec<String>,
}

#[derive(Serialize)]
struct BlockLine {
    height: u64,
    prev_hash: Digest,
    block_hash: Digest,
    txs: Vec<TxLine>,
}

/// One JSON object describing `block`, without a trailing newline.
pub fn dump_block(block: &Block) -> String {
    let line = BlockLine {
        height: block.height,
        prev_hash: block.prev_hash,
        block_hash: block.block_hash,
        txs: block
            .txs
            .iter()
            .map(|t| TxLine {
                tx_id: t.tx_id(),
                client: t.proposal.client.to_string(),
                ts: t.proposal.timestamp.as_us(),
                payload_size: t.proposal.payload.len(),
                endorsers: t.endorsements.iter().map(|e| e.peer.to_string()).collect(),
            })
            .collect(),
    };
    serde_json::to_string(&line).expect("block line serializes")
}

/// JSON-lines ledger dump, one block per line.
pub fn write_dump<W: Write>(mut w: W, blocks: &[Block]) -> io::Result<()> {
    for b in blocks {
        writeln!(w, "{}", dump_block(b))?;
    }
    Ok(())
}
