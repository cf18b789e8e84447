//! NB-IoT air-interface timing: system-information acquisition and NPUSCH /
//! NPDSCH durations for a few message sizes at each coverage level.

use nbchain::radio::{acquire_system_info, dl_duration, ul_duration, CeLevel, CellConfig, TimingModel};
use nbchain::sim::SimTime;

fn main() {
    let cfg = CellConfig::default();
    for wake in [0, 100, 700, 3000] {
        let t = SimTime::from_ms(wake);
        println!("wake at {:>5} ms -> synchronised at {:>7.1} ms", wake, acquire_system_info(&cfg, t).as_ms_f64());
    }

    println!("\nbytes   CE   UL (RU)   DL (RU)   UL (peak)  DL (peak)");
    let peak = CellConfig {
        timing_model: TimingModel::PeakRate,
        ..cfg.clone()
    };
    for bytes in [31, 110, 194, 400] {
        for ce in [CeLevel::Ce0, CeLevel::Ce1, CeLevel::Ce2] {
            println!(
                "{bytes:>5}  {:>3}  {:>7.1}   {:>7.1}   {:>8.2}  {:>8.2}   ms",
                ce.index(),
                ul_duration(bytes, ce, &cfg).as_ms_f64(),
                dl_duration(bytes, ce, &cfg).as_ms_f64(),
                ul_duration(bytes, ce, &peak).as_ms_f64(),
                dl_duration(bytes, ce, &peak).as_ms_f64(),
            );
        }
    }
}
