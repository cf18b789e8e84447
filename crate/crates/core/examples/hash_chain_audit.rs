//! Runs a short scenario, writes the ledger as JSON lines, then audits the
//! encoded chain and shows that flipping one byte anywhere is detected.

use nbchain::ledger::{dump_block, Ledger};
use nbchain::scenario::{CalibrationProfile, ScenarioConfig, World};

fn main() {
    let cfg = ScenarioConfig {
        profile: CalibrationProfile::fig6(),
        n_ues: 2,
        n_transactions: 40,
        block_size_b: 10,
        ..ScenarioConfig::default()
    };
    let out = World::run(cfg).expect("run");
    println!("{} blocks committed", out.blocks.len());
    for b in out.blocks.iter().take(2) {
        println!("{}", dump_block(b));
    }

    let mut encoded: Vec<Vec<u8>> = out.blocks.iter().map(|b| b.encode()).collect();
    println!("untouched chain: {:?}", Ledger::verify_encoded(&encoded));
    let (block, byte) = (encoded.len() / 2, 7);
    encoded[block][byte] ^= 0x01;
    println!("after flipping byte {byte} of block {}: {:?}", block + 1, Ledger::verify_encoded(&encoded));
}
