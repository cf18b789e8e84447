use serde::Serialize;

use crate::sim::SimTime;
use crate::Violation;

/// Coverage-enhancement level, selecting the repetition count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CeLevel {
    Ce0,
    Ce1,
    Ce2,
}

impl CeLevel {
    pub fn index(self) -> usize {
        match self {
            CeLevel::Ce0 => 0,
            CeLevel::Ce1 => 1,
            CeLevel::Ce2 => 2,
        }
    }

    pub fn from_index(i: u64) -> Option<CeLevel> {
        match i {
            0 => Some(CeLevel::Ce0),
            1 => Some(CeLevel::Ce1),
            2 => Some(CeLevel::Ce2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TimingModel {
    /// Whole resource units (UL) / subframes (DL) of a fixed transport block.
    ResourceUnit,
    /// Continuous transfer at the configured peak rate.
    PeakRate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellConfig {
    pub mib_period: SimTime,
    pub sib1_period: SimTime,
    pub nprach_period: SimTime,
    pub preamble_pool: u32,
    pub rar_window: SimTime,
    pub max_ra_attempts: u32,
    pub backoff_max: SimTime,
    pub ru_duration: SimTime,
    pub dl_subframe: SimTime,
    pub ul_tbs_bits_per_ru: u32,
    pub dl_tbs_bits_per_subframe: u32,
    pub repetitions_per_ce: [u32; 3],
    pub ul_peak_rate_bps: u64,
    pub dl_peak_rate_bps: u64,
    pub timing_model: TimingModel,
    /// Size of each of the RA msg3/msg4 signaling messages.
    pub ra_signaling_bytes: u32,
}

impl Default for CellConfig {
    fn default() -> Self {
        CellConfig {
            mib_period: SimTime::from_ms(640),
            sib1_period: SimTime::from_ms(2560),
            nprach_period: SimTime::from_ms(40),
            preamble_pool: 48,
            rar_window: SimTime::from_ms(10),
            max_ra_attempts: 10,
            backoff_max: SimTime::from_ms(256),
            ru_duration: SimTime::from_ms(8),
            dl_subframe: SimTime::from_ms(1),
            ul_tbs_bits_per_ru: 256,
            dl_tbs_bits_per_subframe: 224,
            repetitions_per_ce: [1, 2, 8],
            ul_peak_rate_bps: 250_000,
            dl_peak_rate_bps: 226_700,
            timing_model: TimingModel::ResourceUnit,
            ra_signaling_bytes: 20,
        }
    }
}

impl CellConfig {
    pub fn repetitions(&self, ce: CeLevel) -> u32 {
        self.repetitions_per_ce[ce.index()]
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let periods = [
            ("cell.mib_period_ms", self.mib_period),
            ("cell.sib1_period_ms", self.sib1_period),
            ("cell.nprach_period_ms", self.nprach_period),
            ("cell.rar_window_ms", self.rar_window),
            ("cell.ru_duration_ms", self.ru_duration),
            ("cell.dl_subframe_ms", self.dl_subframe),
        ];
        for (field, p) in periods {
            if p == SimTime::ZERO {
                v.push(Violation::new(field, "must be > 0"));
            }
        }
        if self.preamble_pool < 1 {
            v.push(Violation::new("cell.preamble_pool", "must be >= 1"));
        }
        if self.max_ra_attempts < 1 {
            v.push(Violation::new("cell.max_ra_attempts", "must be >= 1"));
        }
        if self.ul_tbs_bits_per_ru == 0 {
            v.push(Violation::new("cell.ul_tbs_bits_per_ru", "must be > 0"));
        }
        if self.dl_tbs_bits_per_subframe == 0 {
            v.push(Violation::new("cell.dl_tbs_bits_per_subframe", "must be > 0"));
        }
        if self.ul_peak_rate_bps == 0 {
            v.push(Violation::new("cell.ul_peak_rate_bps", "must be > 0"));
        }
        if self.dl_peak_rate_bps == 0 {
            v.push(Violation::new("cell.dl_peak_rate_bps", "must be > 0"));
        }
        for (i, r) in self.repetitions_per_ce.iter().enumerate() {
            if !(1..=1024).contains(r) {
                v.push(Violation::new(
                    ["cell.repetitions_ce0", "cell.repetitions_ce1", "cell.repetitions_ce2"][i],
                    "must be in [1, 1024]",
                ));
            }
        }
        v
    }
}
