//! Configuration, calibration profiles, the simulated world and the
//! experiment sweeps built on top of it.

mod config;
mod plot;
mod profile;
mod sensor;
mod usecase;
mod world;

pub use config::{
    explain_config, load_config, parse_config, parse_mode, ConfigError, LoadOptions, ScenarioConfig,
    UeSettings,
};
pub use profile::{CalibrationProfile, PROFILE_NAMES};
pub use sensor::{SensorKind, SensorModel, SENSOR_MAX_PPM};
pub use plot::{emit_plotdata, latency_points, ratio_points, LatencyPoint, RatioPoint};
pub use usecase::{
    run_sweep, sweep, write_outputs, OutputError, Scenario, SweepPoint, UC1_ENDORSEMENTS, UC1_PAYLOADS,
    UC2_BLOCK_SIZES,
};
pub use world::{AlarmLog, Ev, RunError, RunOutput, World, STREAMS};

use serde::Serialize;

/// Which end-to-end flow a run models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// Readings go straight to an application server.
    Baseline,
    /// Readings go through endorsement, ordering and commit.
    Dlt,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Baseline => "baseline_nbiot",
            Mode::Dlt => "dlt",
        }
    }
}
