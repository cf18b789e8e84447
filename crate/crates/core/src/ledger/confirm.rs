use std::collections::BTreeMap;

use crate::crypto::Digest;
use crate::sim::ActorId;
use crate::Violation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ConfirmMode {
    PerTx,
    PerK(u32),
    PerBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ConfirmationPolicy {
    pub mode: ConfirmMode,
    pub dl_payload_bytes: u32,
}

impl Default for ConfirmationPolicy {
    fn default() -> Self {
        ConfirmationPolicy {
            mode: ConfirmMode::PerTx,
            dl_payload_bytes: 31,
        }
    }
}

impl ConfirmationPolicy {
    pub fn validate(&self) -> Vec<Violation> {
        match self.mode {
            ConfirmMode::PerK(0) => vec![Violation::new("ledger.confirmation", "per_k requires k >= 1")],
            _ => Vec::new(),
        }
    }
}

/// One DL confirmation towards `client` covering `covers` (in commit order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confirmation {
    pub client: ActorId,
    pub covers: Vec<Digest>,
    pub payload_bytes: u32,
}

/// Turns committed transactions into confirmations according to the policy.
#[derive(Debug, Clone)]
pub struct Confirmer {
    pub policy: ConfirmationPolicy,
    backlog: BTreeMap<ActorId, Vec<Digest>>,
}

impl Confirmer {
    pub fn new(policy: ConfirmationPolicy) -> Self {
        Confirmer {
            policy,
            backlog: BTreeMap::new(),
        }
    }

    /// Confirmations for one committed block. Only UE clients are notified.
    pub fn emit_confirmations(&mut self, committed: &[(Digest, ActorId)]) -> Vec<Confirmation> {
        let bytes = self.policy.dl_payload_bytes;
        let ue_txs = committed
            .iter()
            .filter(|(_, c)| matches!(c, ActorId::Ue(_)));
        let mut out = Vec::new();
        match self.policy.mode {
            ConfirmMode::PerTx => {
                for &(tx, client) in ue_txs {
                    out.push(Confirmation {
                        client,
                        covers: vec![tx],
                        payload_bytes: bytes,
                    });
                }
            }
            ConfirmMode::PerK(k) => {
                for &(tx, client) in ue_txs {
                    let pending = self.backlog.entry(client).or_default();
                    pending.push(tx);
                    if pending.len() == k as usize {
                        out.push(Confirmation {
                            client,
                            covers: std::mem::take(pending),
                            payload_bytes: bytes,
                        });
                    }
                }
            }
            ConfirmMode::PerBlock => {
                let mut per_client: BTreeMap<ActorId, Vec<Digest>> = BTreeMap::new();
                for &(tx, client) in ue_txs {
                    per_client.entry(client).or_default().push(tx);
                }
                for (client, covers) in per_client {
                    out.push(Confirmation {
                        client,
                        covers,
                        payload_bytes: bytes,
                    });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crypto::digest;

    fn txs(client: u32, n: u64) -> Vec<(Digest, ActorId)> {
        (0..n)
            .map(|i| (digest(&[client as u8, i as u8]), ActorId::Ue(client)))
            .collect()
    }

    #[test]
    fn per_tx() {
        let mut c = Confirmer::new(ConfirmationPolicy::default());
        let out = c.emit_confirmations(&txs(0, 5));
        assert_eq!(out.len(), 5);
        assert!(out.iter().all(|m| m.payload_bytes == 31 && m.covers.len() == 1));
    }

    #[test]
    fn per_k() {
        let mut c = Confirmer::new(ConfirmationPolicy {
            mode: ConfirmMode::PerK(5),
            dl_payload_bytes: 31,
        });
        assert_eq!(c.emit_confirmations(&txs(0, 10)).len(), 2);
        // Remainders carry over between blocks.
        let mut c = Confirmer::new(ConfirmationPolicy {
            mode: ConfirmMode::PerK(5),
            dl_payload_bytes: 31,
        });
        let all = txs(0, 7);
        assert_eq!(c.emit_confirmations(&all[..3]).len(), 0);
        let out = c.emit_confirmations(&all[3..]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].covers, all[..5].iter().map(|t| t.0).collect::<Vec<_>>());
    }

    #[test]
    fn per_block_one_per_client() {
        let mut c = Confirmer::new(ConfirmationPolicy {
            mode: ConfirmMode::PerBlock,
            dl_payload_bytes: 31,
        });
        let mut block = txs(0, 3);
        block.extend(txs(1, 2));
        block.push((digest(b"alarm"), ActorId::Contract));
        let out = c.emit_confirmations(&block);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].covers.len(), 3);
        assert_eq!(out[1].covers.len(), 2);
    }
}
