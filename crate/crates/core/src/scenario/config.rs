//! Flat `key = value` configuration files.
//!
//! Keys are dotted (`cell.nprach_period_ms`), `#` starts a comment, and every
//! problem in a file is reported at once rather than stopping at the first.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use super::{CalibrationProfile, Mode, SensorKind, SensorModel, PROFILE_NAMES};
use crate::ledger::{
    ConfirmMode, ConfirmationPolicy, EndorseResponseMode, EndorsementPolicy, OrdererConfig,
    READING_RECORD_LEN,
};
use crate::radio::{CeLevel, CellConfig, TimingModel};
use crate::sim::SimTime;
use crate::Violation;

/// Per-UE radio settings shared by every device in a run.
#[derive(Debug, Clone, PartialEq)]
pub struct UeSettings {
    pub ce_level: CeLevel,
    pub cp_ciot: bool,
    pub cp_ciot_max_bytes: u32,
    pub dl_hold_capacity: usize,
}

impl Default for UeSettings {
    fn default() -> Self {
        UeSettings {
            ce_level: CeLevel::Ce0,
            cp_ciot: false,
            cp_ciot_max_bytes: 100,
            dl_hold_capacity: 16,
        }
    }
}

/// Everything needed to run one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub mode: Mode,
    pub n_ues: u32,
    pub payload_bytes: u32,
    pub report_interval: SimTime,
    /// Readings generated in total, across all UEs.
    pub n_transactions: u64,
    pub seed: u64,
    /// Time allowed after the last scheduled reading for in-flight work.
    pub drain: SimTime,
    pub profile: CalibrationProfile,
    pub cell: CellConfig,
    pub ue: UeSettings,
    pub endorsement_e: u32,
    pub peer_pool: u32,
    pub block_size_b: u32,
    pub confirmation: ConfirmationPolicy,
    pub alarm_threshold_ppm: u32,
    pub alarm_window: usize,
    pub sensor: SensorModel,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "run".into(),
            mode: Mode::Dlt,
            n_ues: 1,
            payload_bytes: 50,
            report_interval: SimTime::from_secs(10),
            n_transactions: 1000,
            seed: 1,
            drain: SimTime::from_secs(600),
            profile: CalibrationProfile::default(),
            cell: CellConfig::default(),
            ue: UeSettings::default(),
            endorsement_e: 2,
            peer_pool: 4,
            block_size_b: 30,
            confirmation: ConfirmationPolicy::default(),
            alarm_threshold_ppm: 1000,
            alarm_window: 6,
            sensor: SensorModel::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn policy(&self) -> EndorsementPolicy {
        EndorsementPolicy::new(self.endorsement_e, self.peer_pool)
    }

    pub fn orderer_config(&self) -> OrdererConfig {
        OrdererConfig {
            block_size_b: self.block_size_b,
            batch_timeout: self.profile.batch_timeout,
            block_proc_base: self.profile.block_proc_base,
            block_proc_per_tx: self.profile.block_proc_per_tx,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.n_ues < 1 {
            v.push(Violation::new("scenario.n_ues", "must be >= 1"));
        }
        if (self.payload_bytes as usize) < READING_RECORD_LEN {
            v.push(Violation::new(
                "scenario.payload_bytes",
                format!("must be >= {READING_RECORD_LEN} (one reading record)"),
            ));
        }
        if self.report_interval == SimTime::ZERO {
            v.push(Violation::new("scenario.report_interval_ms", "must be > 0"));
        }
        if self.alarm_threshold_ppm < 1 {
            v.push(Violation::new("contract.threshold_ppm", "must be >= 1"));
        }
        if self.alarm_window < 1 {
            v.push(Violation::new("contract.window", "must be >= 1"));
        }
        if self.ue.dl_hold_capacity < 1 {
            v.push(Violation::new("ue.dl_hold_capacity", "must be >= 1"));
        }
        if self.profile.inactivity_timer == SimTime::ZERO {
            v.push(Violation::new("profile.inactivity_timer_ms", "must be > 0"));
        }
        match &self.sensor.kind {
            SensorKind::Gaussian { sd, .. } if *sd < 0.0 => {
                v.push(Violation::new("sensor.sd_ppm", "must be >= 0"))
            }
            SensorKind::Trace(t) if t.is_empty() => {
                v.push(Violation::new("sensor.trace_file", "must contain at least one reading"))
            }
            _ => {}
        }
        v.extend(self.cell.validate());
        v.extend(self.policy().validate());
        v.extend(self.orderer_config().validate());
        v.extend(self.confirmation.validate());
        v
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}", Listing(.0))]
    Invalid(Vec<Violation>),
}

struct Listing<'a>(&'a [Violation]);

impl fmt::Display for Listing<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} configuration error(s)", self.0.len())?;
        for v in self.0 {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// How to resolve the calibration profile and relative paths.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Takes precedence over `scenario.profile` in the file.
    pub profile: Option<String>,
    /// Used when neither the option nor the file names a profile.
    pub default_profile: Option<String>,
    /// Directory that relative paths in the file are resolved against.
    pub base_dir: Option<PathBuf>,
}

struct KeySpec {
    key: &'static str,
    default: &'static str,
    help: &'static str,
}

const fn k(key: &'static str, default: &'static str, help: &'static str) -> KeySpec {
    KeySpec { key, default, help }
}

const KEYS: &[KeySpec] = &[
    k("scenario.name", "run", "label written to summary.csv"),
    k("scenario.mode", "dlt", "dlt | baseline"),
    k("scenario.n_ues", "1", "number of sensor devices"),
    k("scenario.payload_bytes", "50", "application payload per reading (>= 13)"),
    k("scenario.report_interval_ms", "10000", "time between readings of one device"),
    k("scenario.n_transactions", "1000", "readings generated in total"),
    k("scenario.seed", "1", "master seed of all random streams"),
    k("scenario.drain_ms", "600000", "time allowed after the last reading"),
    k("scenario.profile", "", "calibration profile: default | fig5 | fig6"),
    k("cell.mib_period_ms", "640", "MIB broadcast period"),
    k("cell.sib1_period_ms", "2560", "SIB1 broadcast period"),
    k("cell.nprach_period_ms", "40", "NPRACH occasion period"),
    k("cell.preamble_pool", "48", "preambles per occasion"),
    k("cell.rar_window_ms", "10", "delay from occasion to msg3"),
    k("cell.max_ra_attempts", "10", "attempts before access fails"),
    k("cell.backoff_max_ms", "256", "upper end of the uniform RA backoff"),
    k("cell.ru_duration_ms", "8", "NPUSCH resource unit"),
    k("cell.dl_subframe_ms", "1", "NPDSCH subframe"),
    k("cell.ul_tbs_bits_per_ru", "256", "UL bits per resource unit"),
    k("cell.dl_tbs_bits_per_subframe", "224", "DL bits per subframe"),
    k("cell.repetitions_ce0", "1", "repetitions at CE level 0"),
    k("cell.repetitions_ce1", "2", "repetitions at CE level 1"),
    k("cell.repetitions_ce2", "8", "repetitions at CE level 2"),
    k("cell.ul_peak_rate_bps", "250000", "UL rate in peak_rate timing"),
    k("cell.dl_peak_rate_bps", "226700", "DL rate in peak_rate timing"),
    k("cell.timing_model", "resource_unit", "resource_unit | peak_rate"),
    k("cell.ra_signaling_bytes", "20", "size of RA msg3 and msg4"),
    k("ue.ce_level", "0", "coverage enhancement level 0..2"),
    k("ue.cp_ciot", "false", "piggyback the first small UL message on access"),
    k("ue.cp_ciot_max_bytes", "100", "largest piggybacked message"),
    k("ue.dl_hold_capacity", "16", "DL messages held while idle"),
    k("ledger.endorsement_e", "2", "endorsements required per transaction"),
    k("ledger.peer_pool", "4", "endorsing peers in the network"),
    k("ledger.block_size", "30", "transactions per block"),
    k("ledger.confirmation", "per_tx", "per_tx | per_k:<k> | per_block"),
    k("ledger.dl_payload_bytes", "31", "confirmation and ack payload"),
    k("contract.threshold_ppm", "1000", "alarm when the window mean exceeds this"),
    k("contract.window", "6", "readings in the moving window"),
    k("sensor.kind", "gaussian", "gaussian | constant | trace"),
    k("sensor.mean_ppm", "450", "gaussian mean"),
    k("sensor.sd_ppm", "30", "gaussian standard deviation"),
    k("sensor.constant_ppm", "450", "value of the constant sensor"),
    k("sensor.trace_file", "", "one reading per line, cycled"),
    k("sensor.step_after_ms", "", "time at which the level steps"),
    k("sensor.step_ppm", "1200", "level after the step"),
];

const PROFILE_KEYS: &[KeySpec] = &[
    k("profile.header_bytes_ul", "", "header bytes per UL data message"),
    k("profile.header_bytes_dl", "", "header bytes per DL data message"),
    k("profile.response_extra_bytes", "", "extra bytes per endorsement response"),
    k("profile.backhaul_delay_ms", "", "one-way eNB to ledger delay"),
    k("profile.endorse_service_ms", "", "peer simulation time"),
    k("profile.connected_setup_ms", "", "bearer setup after access"),
    k("profile.block_proc_base_ms", "", "block processing, fixed part"),
    k("profile.block_proc_per_tx_ms", "", "block processing per transaction"),
    k("profile.batch_timeout_ms", "", "orderer batch timeout"),
    k("profile.endorse_response", "", "digest | full_proposal"),
    k("profile.inactivity_timer_ms", "", "idle time before release"),
];

fn parse_num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("expected a non-negative integer, got {v:?}"))
}

fn parse_ms(v: &str) -> Result<SimTime, String> {
    match v.parse::<f64>() {
        Ok(ms) if ms.is_finite() && ms >= 0.0 => Ok(SimTime::from_us((ms * 1000.0).round() as u64)),
        _ => Err(format!("expected a non-negative duration in ms, got {v:?}")),
    }
}

fn parse_f64(v: &str) -> Result<f64, String> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a number, got {v:?}")),
    }
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got {v:?}")),
    }
}

pub fn parse_mode(v: &str) -> Result<Mode, String> {
    match v {
        "dlt" => Ok(Mode::Dlt),
        "baseline" | "baseline_nbiot" => Ok(Mode::Baseline),
        _ => Err(format!("expected dlt or baseline, got {v:?}")),
    }
}

fn parse_confirm(v: &str) -> Result<ConfirmMode, String> {
    match v {
        "per_tx" => Ok(ConfirmMode::PerTx),
        "per_block" => Ok(ConfirmMode::PerBlock),
        _ => match v.strip_prefix("per_k:") {
            Some(k) => Ok(ConfirmMode::PerK(parse_num(k)?)),
            None => Err(format!("expected per_tx, per_k:<k> or per_block, got {v:?}")),
        },
    }
}

fn read_trace(path: &Path) -> Result<Vec<u32>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(
            line.parse()
                .map_err(|_| format!("{}:{}: bad reading {line:?}", path.display(), i + 1))?,
        );
    }
    Ok(out)
}

/// Sensor keys are gathered first because `sensor.kind` decides which of
/// the others matter.
#[derive(Default)]
struct SensorKeys {
    kind: Option<String>,
    mean: Option<f64>,
    sd: Option<f64>,
    constant: Option<u32>,
    trace: Option<Vec<u32>>,
    step_after: Option<SimTime>,
    step_ppm: Option<u32>,
}

fn apply(
    cfg: &mut ScenarioConfig,
    sensor: &mut SensorKeys,
    key: &str,
    v: &str,
    base_dir: Option<&Path>,
) -> Result<(), String> {
    let p = &mut cfg.profile;
    let c = &mut cfg.cell;
    match key {
        "scenario.name" => cfg.name = v.to_string(),
        "scenario.mode" => cfg.mode = parse_mode(v)?,
        "scenario.n_ues" => cfg.n_ues = parse_num(v)?,
        "scenario.payload_bytes" => cfg.payload_bytes = parse_num(v)?,
        "scenario.report_interval_ms" => cfg.report_interval = parse_ms(v)?,
        "scenario.n_transactions" => cfg.n_transactions = parse_num(v)?,
        "scenario.seed" => cfg.seed = parse_num(v)?,
        "scenario.drain_ms" => cfg.drain = parse_ms(v)?,
        "scenario.profile" => {}
        "cell.mib_period_ms" => c.mib_period = parse_ms(v)?,
        "cell.sib1_period_ms" => c.sib1_period = parse_ms(v)?,
        "cell.nprach_period_ms" => c.nprach_period = parse_ms(v)?,
        "cell.preamble_pool" => c.preamble_pool = parse_num(v)?,
        "cell.rar_window_ms" => c.rar_window = parse_ms(v)?,
        "cell.max_ra_attempts" => c.max_ra_attempts = parse_num(v)?,
        "cell.backoff_max_ms" => c.backoff_max = parse_ms(v)?,
        "cell.ru_duration_ms" => c.ru_duration = parse_ms(v)?,
        "cell.dl_subframe_ms" => c.dl_subframe = parse_ms(v)?,
        "cell.ul_tbs_bits_per_ru" => c.ul_tbs_bits_per_ru = parse_num(v)?,
        "cell.dl_tbs_bits_per_subframe" => c.dl_tbs_bits_per_subframe = parse_num(v)?,
        "cell.repetitions_ce0" => c.repetitions_per_ce[0] = parse_num(v)?,
        "cell.repetitions_ce1" => c.repetitions_per_ce[1] = parse_num(v)?,
        "cell.repetitions_ce2" => c.repetitions_per_ce[2] = parse_num(v)?,
        "cell.ul_peak_rate_bps" => c.ul_peak_rate_bps = parse_num(v)?,
        "cell.dl_peak_rate_bps" => c.dl_peak_rate_bps = parse_num(v)?,
        "cell.timing_model" => {
            c.timing_model = match v {
                "resource_unit" => TimingModel::ResourceUnit,
                "peak_rate" => TimingModel::PeakRate,
                _ => return Err(format!("expected resource_unit or peak_rate, got {v:?}")),
            }
        }
        "cell.ra_signaling_bytes" => c.ra_signaling_bytes = parse_num(v)?,
        "ue.ce_level" => {
            cfg.ue.ce_level = CeLevel::from_index(parse_num(v)?)
                .ok_or_else(|| format!("must be in [0, 2], got {v}"))?
        }
        "ue.cp_ciot" => cfg.ue.cp_ciot = parse_bool(v)?,
        "ue.cp_ciot_max_bytes" => cfg.ue.cp_ciot_max_bytes = parse_num(v)?,
        "ue.dl_hold_capacity" => cfg.ue.dl_hold_capacity = parse_num(v)?,
        "ledger.endorsement_e" => cfg.endorsement_e = parse_num(v)?,
        "ledger.peer_pool" => cfg.peer_pool = parse_num(v)?,
        "ledger.block_size" => cfg.block_size_b = parse_num(v)?,
        "ledger.confirmation" => cfg.confirmation.mode = parse_confirm(v)?,
        "ledger.dl_payload_bytes" => cfg.confirmation.dl_payload_bytes = parse_num(v)?,
        "contract.threshold_ppm" => cfg.alarm_threshold_ppm = parse_num(v)?,
        "contract.window" => cfg.alarm_window = parse_num(v)?,
        "sensor.kind" => match v {
            "gaussian" | "constant" | "trace" => sensor.kind = Some(v.to_string()),
            _ => return Err(format!("expected gaussian, constant or trace, got {v:?}")),
        },
        "sensor.mean_ppm" => sensor.mean = Some(parse_f64(v)?),
        "sensor.sd_ppm" => sensor.sd = Some(parse_f64(v)?),
        "sensor.constant_ppm" => sensor.constant = Some(parse_num(v)?),
        "sensor.trace_file" => {
            if !v.is_empty() {
                let path = match base_dir {
                    Some(d) if Path::new(v).is_relative() => d.join(v),
                    _ => PathBuf::from(v),
                };
                sensor.trace = Some(read_trace(&path)?);
            }
        }
        "sensor.step_after_ms" => {
            if !v.is_empty() {
                sensor.step_after = Some(parse_ms(v)?)
            }
        }
        "sensor.step_ppm" => sensor.step_ppm = Some(parse_num(v)?),
        "profile.header_bytes_ul" => p.header_bytes_ul = parse_num(v)?,
        "profile.header_bytes_dl" => p.header_bytes_dl = parse_num(v)?,
        "profile.response_extra_bytes" => p.response_extra_bytes = parse_num(v)?,
        "profile.backhaul_delay_ms" => p.backhaul_delay = parse_ms(v)?,
        "profile.endorse_service_ms" => p.endorse_service = parse_ms(v)?,
        "profile.connected_setup_ms" => p.connected_setup = parse_ms(v)?,
        "profile.block_proc_base_ms" => p.block_proc_base = parse_ms(v)?,
        "profile.block_proc_per_tx_ms" => p.block_proc_per_tx = parse_ms(v)?,
        "profile.batch_timeout_ms" => p.batch_timeout = parse_ms(v)?,
        "profile.endorse_response" => {
            p.endorse_response = match v {
                "digest" => EndorseResponseMode::Digest,
                "full_proposal" => EndorseResponseMode::FullProposal,
                _ => return Err(format!("expected digest or full_proposal, got {v:?}")),
            }
        }
        "profile.inactivity_timer_ms" => p.inactivity_timer = parse_ms(v)?,
        _ => return Err("unknown key".into()),
    }
    Ok(())
}

fn build_sensor(s: SensorKeys) -> Result<SensorModel, Violation> {
    let kind = match s.kind.as_deref().unwrap_or("gaussian") {
        "constant" => SensorKind::Constant(s.constant.unwrap_or(450)),
        "trace" => SensorKind::Trace(
            s.trace
                .ok_or_else(|| Violation::new("sensor.trace_file", "required when sensor.kind = trace"))?,
        ),
        _ => SensorKind::Gaussian {
            mean: s.mean.unwrap_or(450.0),
            sd: s.sd.unwrap_or(30.0),
        },
    };
    Ok(SensorModel {
        kind,
        step: s.step_after.map(|at| (at, s.step_ppm.unwrap_or(1200))),
    })
}

/// Parses and validates a configuration text, collecting every violation.
pub fn parse_config(text: &str, opts: &LoadOptions) -> Result<ScenarioConfig, ConfigError> {
    let mut errors = Vec::new();
    let mut entries: Vec<(usize, &str, &str)> = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(Violation::new(format!("line {}", i + 1), "expected key = value"));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key) {
            errors.push(Violation::new(key, format!("duplicate key on line {}", i + 1)));
            continue;
        }
        entries.push((i + 1, key, value));
    }

    let from_file = entries
        .iter()
        .find(|(_, k, v)| *k == "scenario.profile" && !v.is_empty())
        .map(|(_, _, v)| v.to_string());
    let profile_name = opts
        .profile
        .clone()
        .or(from_file)
        .or_else(|| opts.default_profile.clone())
        .unwrap_or_else(|| "default".into());
    let mut cfg = ScenarioConfig::default();
    match CalibrationProfile::by_name(&profile_name) {
        Some(p) => cfg.profile = p,
        None => errors.push(Violation::new(
            "scenario.profile",
            format!("unknown profile {profile_name:?}, expected one of {}", PROFILE_NAMES.join(", ")),
        )),
    }

    let mut sensor = SensorKeys::default();
    for (line, key, value) in entries {
        if let Err(msg) = apply(&mut cfg, &mut sensor, key, value, opts.base_dir.as_deref()) {
            errors.push(Violation::new(key, format!("{msg} (line {line})")));
        }
    }
    match build_sensor(sensor) {
        Ok(s) => cfg.sensor = s,
        Err(v) => errors.push(v),
    }
    errors.extend(cfg.validate());
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError::Invalid(errors))
    }
}

pub fn load_config(path: &Path, opts: &LoadOptions) -> Result<ScenarioConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut opts = opts.clone();
    if opts.base_dir.is_none() {
        opts.base_dir = path.parent().map(Path::to_path_buf);
    }
    parse_config(&text, &opts)
}

fn ms(t: SimTime) -> String {
    format!("{}", t.as_ms_f64())
}

fn profile_value(p: &CalibrationProfile, key: &str) -> String {
    match key {
        "profile.header_bytes_ul" => p.header_bytes_ul.to_string(),
        "profile.header_bytes_dl" => p.header_bytes_dl.to_string(),
        "profile.response_extra_bytes" => p.response_extra_bytes.to_string(),
        "profile.backhaul_delay_ms" => ms(p.backhaul_delay),
        "profile.endorse_service_ms" => ms(p.endorse_service),
        "profile.connected_setup_ms" => ms(p.connected_setup),
        "profile.block_proc_base_ms" => ms(p.block_proc_base),
        "profile.block_proc_per_tx_ms" => ms(p.block_proc_per_tx),
        "profile.batch_timeout_ms" => ms(p.batch_timeout),
        "profile.endorse_response" => match p.endorse_response {
            EndorseResponseMode::Digest => "digest".into(),
            EndorseResponseMode::FullProposal => "full_proposal".into(),
        },
        "profile.inactivity_timer_ms" => ms(p.inactivity_timer),
        _ => String::new(),
    }
}

/// Every recognised key with its default, formatted as a valid config file.
pub fn explain_config() -> String {
    let mut out = String::from("# Recognised configuration keys and their defaults.\n");
    let mut section = "";
    for spec in KEYS {
        let s = spec.key.split('.').next().unwrap_or("");
        if s != section {
            out.push_str(&format!("\n# {s}\n"));
            section = s;
        }
        out.push_str(&format!("{} = {}  # {}\n", spec.key, spec.default, spec.help));
    }
    out.push_str("\n# profile overrides (commented out; values shown per profile)\n");
    let profiles: Vec<CalibrationProfile> = PROFILE_NAMES
        .iter()
        .filter_map(|n| CalibrationProfile::by_name(n))
        .collect();
    for spec in PROFILE_KEYS {
        let values: Vec<String> = profiles
            .iter()
            .map(|p| format!("{}={}", p.name, profile_value(p, spec.key)))
            .collect();
        out.push_str(&format!("# {} = ...  # {}; {}\n", spec.key, spec.help, values.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig, ConfigError> {
        parse_config(text, &LoadOptions::default())
    }

    fn violations(text: &str) -> Vec<Violation> {
        match parse(text) {
            Err(ConfigError::Invalid(v)) => v,
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(parse("").unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn explained_defaults_round_trip() {
        assert_eq!(parse(&explain_config()).unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn every_key_is_applied() {
        let mut cfg = ScenarioConfig::default();
        let mut s = SensorKeys::default();
        for spec in KEYS.iter().chain(PROFILE_KEYS) {
            let r = apply(&mut cfg, &mut s, spec.key, "1", None);
            assert_ne!(r, Err("unknown key".to_string()), "{}", spec.key);
        }
    }

    #[test]
    fn endorsement_above_pool_is_rejected() {
        let v = violations("ledger.endorsement_e = 5\nledger.peer_pool = 4\n");
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "ledger.endorsement_e");
        assert!(v[0].bound.contains("peer_pool"), "{}", v[0]);
    }

    #[test]
    fn all_violations_are_collected() {
        let v = violations("ledger.block_size = 0\nscenario.payload_bytes = 4\nbogus.key = 1\ncell.preamble_pool = x\n");
        let fields: Vec<&str> = v.iter().map(|v| v.field.as_str()).collect();
        for f in ["ledger.block_size", "scenario.payload_bytes", "bogus.key", "cell.preamble_pool"] {
            assert!(fields.contains(&f), "{f} missing from {fields:?}");
        }
    }

    #[test]
    fn duplicate_and_malformed_lines() {
        let v = violations("scenario.seed = 1\nscenario.seed = 2\njust words\n");
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn profile_selection_and_override() {
        let cfg = parse("scenario.profile = fig6\nprofile.connected_setup_ms = 12.5\n").unwrap();
        assert_eq!(cfg.profile.name, "fig6");
        assert_eq!(cfg.profile.connected_setup, SimTime::from_us(12_500));
        let opts = LoadOptions {
            profile: Some("fig5".into()),
            ..Default::default()
        };
        let cfg = parse_config("scenario.profile = fig6\n", &opts).unwrap();
        assert_eq!(cfg.profile.name, "fig5");
        assert_eq!(violations("scenario.profile = nope\n")[0].field, "scenario.profile");
    }

    #[test]
    fn confirmation_modes() {
        assert_eq!(parse("ledger.confirmation = per_k:3").unwrap().confirmation.mode, ConfirmMode::PerK(3));
        assert_eq!(violations("ledger.confirmation = per_k:0")[0].field, "ledger.confirmation");
    }

    #[test]
    fn sensor_variants() {
        let cfg = parse("sensor.kind = constant\nsensor.constant_ppm = 900\nsensor.step_after_ms = 5000\n").unwrap();
        assert_eq!(cfg.sensor.kind, SensorKind::Constant(900));
        assert_eq!(cfg.sensor.step, Some((SimTime::from_secs(5), 1200)));
        assert_eq!(violations("sensor.kind = trace\n")[0].field, "sensor.trace_file");
    }

    #[test]
    fn trace_file_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("co2.txt"), "# ppm\n400\n500\n").unwrap();
        fs::write(dir.path().join("run.conf"), "sensor.kind = trace\nsensor.trace_file = co2.txt\n").unwrap();
        let cfg = load_config(&dir.path().join("run.conf"), &LoadOptions::default()).unwrap();
        assert_eq!(cfg.sensor.kind, SensorKind::Trace(vec![400, 500]));
    }
}
