//! Grid search for the calibration constants frozen in the `fig5` and
//! `fig6` profiles.
//!
//! - fig5: `response_extra_bytes` so that P=50 B, E=2 gives a UL/DL ratio
//!   of 0.5 ("DL almost twice UL").
//! - fig6: `connected_setup` against a 0.832 s baseline mean, then
//!   `batch_timeout` against a 1.63 s mean at b=100.
//!
//! Run with `cargo run --release --example calibrate`.

use nbchain::scenario::{CalibrationProfile, Mode, ScenarioConfig, World};
use nbchain::sim::SimTime;

const SEEDS: [u64; 3] = [1, 2, 3];

fn mean_over_seeds(cfg: &ScenarioConfig, f: impl Fn(&nbchain::metrics::RunSummary) -> f64) -> f64 {
    let mut acc = 0.0;
    for seed in SEEDS {
        let mut c = cfg.clone();
        c.seed = seed;
        acc += f(&World::run(c).expect("calibration run").summary);
    }
    acc / SEEDS.len() as f64
}

/// Returns the grid value whose metric lands closest to `target`.
fn fit<T: Copy + std::fmt::Debug>(grid: impl IntoIterator<Item = T>, target: f64, mut metric: impl FnMut(T) -> f64) -> (T, f64) {
    grid.into_iter()
        .map(|x| (x, metric(x)))
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .expect("non-empty grid")
}

fn main() {
    let mut c5 = ScenarioConfig {
        profile: CalibrationProfile::fig5(),
        n_transactions: 50,
        payload_bytes: 50,
        endorsement_e: 2,
        ..ScenarioConfig::default()
    };
    let (extra, ratio) = fit((0..=400).step_by(2), 0.5, |x| {
        c5.profile.response_extra_bytes = x;
        World::run(c5.clone()).expect("run").summary.ratio_mean.expect("ratio")
    });
    c5.profile.response_extra_bytes = extra;
    println!("fig5: response_extra_bytes = {extra}  (ratio at P=50, E=2: {ratio:.4})");

    let base6 = ScenarioConfig {
        profile: CalibrationProfile::fig6(),
        n_ues: 2,
        n_transactions: 300,
        ..ScenarioConfig::default()
    };
    let mut bl = ScenarioConfig {
        mode: Mode::Baseline,
        ..base6.clone()
    };
    let (setup_ms, bl_mean) = fit((600..=900).step_by(5), 0.832, |ms| {
        bl.profile.connected_setup = SimTime::from_ms(ms);
        mean_over_seeds(&bl, |s| s.e2e_mean_s.expect("latency"))
    });
    println!("fig6: connected_setup = {setup_ms} ms  (baseline mean {bl_mean:.4} s)");

    let mut dlt = ScenarioConfig {
        block_size_b: 100,
        ..base6
    };
    dlt.profile.connected_setup = SimTime::from_ms(setup_ms);
    let (timeout_ms, dlt_mean) = fit((100..=1500).step_by(10), 1.63, |ms| {
        dlt.profile.batch_timeout = SimTime::from_ms(ms);
        mean_over_seeds(&dlt, |s| s.e2e_mean_s.expect("latency"))
    });
    println!("fig6: batch_timeout = {timeout_ms} ms  (b=100 mean {dlt_mean:.4} s)");
}
