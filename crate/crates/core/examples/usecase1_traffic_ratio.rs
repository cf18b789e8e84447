//! Data authorization: UL/DL data ratio over payload size and endorsement
//! count, one UE, with the baseline (no ledger) series alongside.
//!
//! `cargo run --release --example usecase1_traffic_ratio [n_transactions]`

use nbchain::scenario::{ratio_points, run_sweep, sweep, CalibrationProfile, Scenario, ScenarioConfig};

fn main() {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let base = ScenarioConfig {
        profile: CalibrationProfile::fig5(),
        n_transactions: n,
        ..ScenarioConfig::default()
    };
    let runs = run_sweep(&sweep(Scenario::Usecase1, &base)).expect("sweep");
    let summaries: Vec<_> = runs.iter().map(|(_, r)| r.summary.clone()).collect();
    println!("   P   baseline      E=1      E=2      E=3      E=4");
    let pts = ratio_points(&summaries);
    for p in [50, 100, 150, 200] {
        let row: Vec<String> = (0..=4)
            .map(|e| {
                let r = pts.iter().find(|x| x.payload_bytes == p && x.e == e).map_or(f64::NAN, |x| x.ratio);
                format!("{r:>8.3}")
            })
            .collect();
        println!("{p:>4}   {}", row.join(" "));
    }
}
