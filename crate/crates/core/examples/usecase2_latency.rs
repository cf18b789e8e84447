//! Real-time monitoring: end-to-end latency over block size for two UEs
//! reporting every 10 s, against the plain NB-IoT baseline.
//!
//! `cargo run --release --example usecase2_latency [n_transactions]`

use nbchain::scenario::{latency_points, run_sweep, sweep, CalibrationProfile, Scenario, ScenarioConfig};

fn main() {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(400);
    let base = ScenarioConfig {
        profile: CalibrationProfile::fig6(),
        n_transactions: n,
        ..ScenarioConfig::default()
    };
    let runs = run_sweep(&sweep(Scenario::Usecase2, &base)).expect("sweep");
    let summaries: Vec<_> = runs.iter().map(|(_, r)| r.summary.clone()).collect();
    println!("     b   mean_s    p95_s");
    for p in latency_points(&summaries) {
        let b = if p.b == 0 { "base".to_string() } else { p.b.to_string() };
        println!("{b:>6}   {:.3}    {:.3}", p.mean_s, p.p95_s);
    }
    for (label, r) in &runs {
        if let Some(s) = &r.stats {
            let peak = s.histogram.iter().max_by_key(|b| b.count).expect("non-empty");
            println!("{label:>8}: {} records, modal bin starts at {:.1} s", s.count, peak.start.as_secs_f64());
        }
    }
}
