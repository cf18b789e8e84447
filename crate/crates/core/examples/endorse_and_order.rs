//! One transaction through execute-order-validate by hand: a UE signs a
//! proposal, two peers endorse it, the orderer batches it, and the committer
//! validates the block. A second envelope with a forged endorsement is
//! rejected at the orderer.

use nbchain::crypto::KeyPair;
use nbchain::ledger::{
    endorse, EndorsedTransaction, EndorsementPolicy, Ledger, Membership, Orderer, OrdererConfig, Peer,
    SmartContract, TransactionProposal, TxPayload,
};
use nbchain::sim::{ActorId, SimTime};

fn main() {
    let seed = 1;
    let ue = ActorId::Ue(0);
    let ue_key = KeyPair::derive(seed, "ue0");
    let peers: Vec<Peer> = (0..4).map(|i| Peer::new(i, seed)).collect();
    let mut membership = Membership::default();
    membership.insert(ue, ue_key.public());
    for p in &peers {
        membership.insert(p.id, p.key.public());
    }
    let policy = EndorsementPolicy::new(2, 4);
    let mut ledger = Ledger::new(SmartContract::new(1000, 6));

    let payload = TxPayload::Reading { sensor: 0, seq: 0, ppm: 455 }.encode(50);
    let proposal = TransactionProposal::new_signed(ue, payload, SimTime::from_secs(10), 1, &ue_key);
    println!("proposal {} ({} bytes on the wire)", proposal.tx_id.to_hex(), proposal.wire_len());

    let endorsements: Vec<_> = peers[..2]
        .iter()
        .map(|p| endorse(p, &proposal, &membership, &ledger).expect("valid proposal"))
        .collect();
    let etx = EndorsedTransaction {
        proposal: proposal.clone(),
        endorsements,
    };
    println!("endorsed by {:?}, envelope {} bytes", etx.endorsers(), etx.wire_len());

    let mut forged = etx.clone();
    forged.endorsements[1].signature.0[10] ^= 0xff;

    let mut orderer = Orderer::new(OrdererConfig {
        block_size_b: 1,
        ..OrdererConfig::default()
    });
    println!("forged envelope: {:?}", orderer.submit(forged, SimTime::from_secs(11), &policy, &membership));
    println!("valid envelope:  {:?}", orderer.submit(etx, SimTime::from_secs(11), &policy, &membership));
    let batch = orderer.cut_block(SimTime::from_secs(11)).expect("batch is full");
    println!("block {} cut, ready at {}", batch.block.height, batch.ready_at);

    let result = ledger.validate_and_commit(batch.block, &policy, &membership).expect("chain links");
    println!("validity {:?}", result.validity);
    println!("world state reading/ue0 = {:?}", ledger.state.query("reading/ue0"));
    println!("endorsing again: {:?}", endorse(&peers[0], &proposal, &membership, &ledger));
}
