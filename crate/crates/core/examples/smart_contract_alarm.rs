//! CO2 monitoring with an alarm contract: the sensor level steps from about
//! 450 ppm to 1200 ppm halfway through, and the contract raises alarms once
//! the moving window mean crosses 1000 ppm. Each alarm is itself committed.

use nbchain::scenario::{CalibrationProfile, ScenarioConfig, SensorKind, SensorModel, World};
use nbchain::sim::SimTime;

fn main() {
    let cfg = ScenarioConfig {
        profile: CalibrationProfile::fig6(),
        n_ues: 2,
        n_transactions: 60,
        block_size_b: 10,
        sensor: SensorModel {
            kind: SensorKind::Gaussian { mean: 450.0, sd: 30.0 },
            step: Some((SimTime::from_secs(150), 1200)),
        },
        ..ScenarioConfig::default()
    };
    let out = World::run(cfg).expect("run");
    println!("{} readings committed, {} alarms", out.summary.committed, out.alarms.len());
    for a in out.alarms.iter().take(6) {
        println!(
            "t={:>7.2}s {} mean={:.1} ppm reading #{} trigger block {} -> alarm committed in block {:?}",
            a.raised_at.as_secs_f64(),
            a.sensor,
            a.mean_ppm,
            a.reading_index,
            a.trigger_height,
            a.committed_height
        );
    }
}
