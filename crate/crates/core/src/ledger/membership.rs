use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{EndorsedTransaction, Rejection, TransactionProposal};
use crate::crypto::{digest_parts, verify, Digest, PublicBytes};
use crate::sim::ActorId;
use crate::Violation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndorsementPolicy {
    pub required_e: u32,
    pub peer_pool: Vec<ActorId>,
}

impl EndorsementPolicy {
    pub fn new(required_e: u32, pool_size: u32) -> Self {
        EndorsementPolicy {
            required_e,
            peer_pool: (0..pool_size).map(ActorId::Peer).collect(),
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.required_e < 1 {
            v.push(Violation::new("ledger.endorsement_e", "must be >= 1"));
        }
        if self.required_e as usize > self.peer_pool.len() {
            v.push(Violation::new(
                "ledger.endorsement_e",
                format!(
                    "must be <= ledger.peer_pool ({}), got {}",
                    self.peer_pool.len(),
                    self.required_e
                ),
            ));
        }
        v
    }
}

/// `E` distinct peers drawn uniformly without replacement.
pub fn select_peers<R: Rng>(policy: &EndorsementPolicy, rng: &mut R) -> Vec<ActorId> {
    policy
        .peer_pool
        .choose_multiple(rng, policy.required_e as usize)
        .copied()
        .collect()
}

/// Public keys of every identity in the network.
///
/// Verification results are memoised by `(signer, message digest, signature)`.
/// Verification is a pure function of those bytes, so the memo only saves the
/// repeated checks the same envelope receives at each peer, the orderer and
/// the committer.
#[derive(Debug, Default)]
pub struct Membership {
    keys: BTreeMap<ActorId, PublicBytes>,
    memo: RefCell<HashMap<Digest, bool>>,
}

impl Membership {
    pub fn insert(&mut self, id: ActorId, key: PublicBytes) {
        self.keys.insert(id, key);
    }

    pub fn key(&self, id: ActorId) -> Option<&PublicBytes> {
        self.keys.get(&id)
    }

    pub fn verify(&self, signer: ActorId, message: &[u8], sig: &[u8]) -> bool {
        let Some(pk) = self.keys.get(&signer) else {
            return false;
        };
        let key = digest_parts([pk.0.as_slice(), message, sig]);
        if let Some(&ok) = self.memo.borrow().get(&key) {
            return ok;
        }
        let ok = verify(&pk.0, message, sig);
        self.memo.borrow_mut().insert(key, ok);
        ok
    }

    pub fn verify_client(&self, p: &TransactionProposal) -> bool {
        self.verify(p.client, &p.signing_bytes(), &p.client_sig.0)
    }

    /// Client signature plus at least `required_e` valid endorsements from
    /// distinct pool members. An envelope naming the same endorser twice is
    /// malformed.
    pub fn check_policy(
        &self,
        etx: &EndorsedTransaction,
        policy: &EndorsementPolicy,
    ) -> Result<(), Rejection> {
        if !self.verify_client(&etx.proposal) {
            return Err(Rejection::BadSignature);
        }
        let mut named: Vec<ActorId> = etx.endorsers();
        named.sort();
        named.dedup();
        if named.len() != etx.endorsements.len() {
            return Err(Rejection::Malformed);
        }
        let d = etx.proposal.digest();
        let valid = etx
            .endorsements
            .iter()
            .filter(|e| policy.peer_pool.contains(&e.peer))
            .filter(|e| self.verify(e.peer, &d.0, &e.signature.0))
            .count();
        if valid < policy.required_e as usize {
            return Err(Rejection::InsufficientEndorsements);
        }
        Ok(())
    }
}
