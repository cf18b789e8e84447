//! Preamble collisions on the NPRACH: empirical first-attempt success rate
//! against the closed form (1 - 1/K)^(N-1) for a pool of K preambles.

use nbchain::radio::RandomAccessChannel;
use nbchain::sim::{ActorId, SimTime};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let occasions = 10_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!("  N   empirical   expected");
    for n in [1u32, 2, 4, 8, 16, 32] {
        let mut ch = RandomAccessChannel::new(SimTime::from_ms(40), 48);
        let (mut ok, mut total) = (0u64, 0u64);
        for k in 0..occasions {
            let ready = SimTime::from_ms(40 * k);
            let mut occasion = ready;
            for ue in 0..n {
                let p = ch.draw_preamble(&mut rng);
                occasion = ch.register(ActorId::Ue(ue), ready, p).0;
            }
            for o in ch.resolve(occasion) {
                total += 1;
                ok += u64::from(o.success);
            }
        }
        let expected = (1.0 - 1.0 / 48.0f64).powi(n as i32 - 1);
        println!("{n:>3}   {:>9.4}   {expected:>8.4}", ok as f64 / total as f64);
    }
}
