use super::{CeLevel, CellConfig, TimingModel};
use crate::sim::SimTime;

/// Time at which a UE waking at `wake` has received MIB-NB and then SIB1-NB.
///
/// Both are broadcast on period boundaries; SIB1 is awaited after the MIB.
pub fn acquire_system_info(cfg: &CellConfig, wake: SimTime) -> SimTime {
    let mib = wake.next_multiple_of(cfg.mib_period);
    mib.next_multiple_of(cfg.sib1_period)
}

fn airtime(
    bytes: u32,
    reps: u32,
    model: TimingModel,
    tbs_bits: u32,
    unit: SimTime,
    peak_bps: u64,
) -> SimTime {
    if bytes == 0 {
        return SimTime::ZERO;
    }
    let bits = u64::from(bytes) * 8;
    match model {
        TimingModel::ResourceUnit => {
            let units = bits.div_ceil(u64::from(tbs_bits));
            unit * (units * u64::from(reps))
        }
        TimingModel::PeakRate => {
            let us = (bits * 1_000_000).div_ceil(peak_bps);
            SimTime::from_us(us * u64::from(reps))
        }
    }
}

/// NPUSCH airtime for `bytes` including repetitions.
pub fn ul_duration(bytes: u32, ce: CeLevel, cfg: &CellConfig) -> SimTime {
    airtime(
        bytes,
        cfg.repetitions(ce),
        cfg.timing_model,
        cfg.ul_tbs_bits_per_ru,
        cfg.ru_duration,
        cfg.ul_peak_rate_bps,
    )
}

/// PDSCH airtime for `bytes` including repetitions.
pub fn dl_duration(bytes: u32, ce: CeLevel, cfg: &CellConfig) -> SimTime {
    airtime(
        bytes,
        cfg.repetitions(ce),
        cfg.timing_model,
        cfg.dl_tbs_bits_per_subframe,
        cfg.dl_subframe,
        cfg.dl_peak_rate_bps,
    )
}
