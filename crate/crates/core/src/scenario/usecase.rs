use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{Mode, RunError, RunOutput, ScenarioConfig, World};
use crate::ledger::write_dump;
use crate::metrics::{write_per_tx_csv, write_summary_csv, MetricsError, RunSummary};

pub const UC1_PAYLOADS: [u32; 4] = [50, 100, 150, 200];
pub const UC1_ENDORSEMENTS: [u32; 4] = [1, 2, 3, 4];
pub const UC2_BLOCK_SIZES: [u32; 4] = [10, 30, 50, 100];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Traffic ratio over payload size and endorsement count, one UE.
    Usecase1,
    /// Latency over block size, two UEs.
    Usecase2,
    /// A single baseline run with the configured parameters.
    Baseline,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Usecase1 => "usecase1",
            Scenario::Usecase2 => "usecase2",
            Scenario::Baseline => "baseline",
        }
    }

    pub fn parse(s: &str) -> Option<Scenario> {
        match s {
            "usecase1" => Some(Scenario::Usecase1),
            "usecase2" => Some(Scenario::Usecase2),
            "baseline" => Some(Scenario::Baseline),
            _ => None,
        }
    }

    /// Profile used when neither the command line nor the file names one.
    pub fn default_profile(self) -> &'static str {
        match self {
            Scenario::Usecase1 => "fig5",
            Scenario::Usecase2 | Scenario::Baseline => "fig6",
        }
    }
}

/// One run of a sweep, with a file-name-safe label.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub label: String,
    pub cfg: ScenarioConfig,
}

fn point(label: String, mut cfg: ScenarioConfig, scenario: Scenario) -> SweepPoint {
    cfg.name = scenario.name().to_string();
    SweepPoint { label, cfg }
}

/// The runs a scenario consists of, derived from `base`.
pub fn sweep(scenario: Scenario, base: &ScenarioConfig) -> Vec<SweepPoint> {
    let mut out = Vec::new();
    match scenario {
        Scenario::Usecase1 => {
            let mut base = base.clone();
            base.n_ues = 1;
            base.peer_pool = base.peer_pool.max(4);
            for p in UC1_PAYLOADS {
                for e in UC1_ENDORSEMENTS {
                    let mut c = base.clone();
                    c.mode = Mode::Dlt;
                    c.payload_bytes = p;
                    c.endorsement_e = e;
                    out.push(point(format!("P{p:03}_E{e}"), c, scenario));
                }
                let mut c = base.clone();
                c.mode = Mode::Baseline;
                c.payload_bytes = p;
                out.push(point(format!("P{p:03}_baseline"), c, scenario));
            }
        }
        Scenario::Usecase2 => {
            let mut base = base.clone();
            base.n_ues = 2;
            for b in UC2_BLOCK_SIZES {
                let mut c = base.clone();
                c.mode = Mode::Dlt;
                c.block_size_b = b;
                out.push(point(format!("b{b:03}"), c, scenario));
            }
            let mut c = base;
            c.mode = Mode::Baseline;
            out.push(point("baseline".into(), c, scenario));
        }
        Scenario::Baseline => {
            let mut c = base.clone();
            c.mode = Mode::Baseline;
            out.push(point("baseline".into(), c, scenario));
        }
    }
    out
}

/// Runs every point of a sweep in order.
pub fn run_sweep(points: &[SweepPoint]) -> Result<Vec<(String, RunOutput)>, RunError> {
    points
        .iter()
        .map(|p| Ok((p.label.clone(), World::run(p.cfg.clone())?)))
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

fn create(path: &Path) -> Result<BufWriter<File>, OutputError> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes the artefacts of a finished sweep into `dir`.
pub fn write_outputs(
    dir: &Path,
    scenario: Scenario,
    runs: &[(String, RunOutput)],
    trace: bool,
) -> Result<(), OutputError> {
    for sub in ["per_tx", "ledger"] {
        fs::create_dir_all(dir.join(sub))?;
    }
    let summaries: Vec<RunSummary> = runs.iter().map(|(_, r)| r.summary.clone()).collect();
    write_summary_csv(create(&dir.join("summary.csv"))?, &summaries)?;

    let mut alarms = create(&dir.join("alarms.csv"))?;
    writeln!(alarms, "run,raised_at_us,sensor,mean_ppm,reading_index,trigger_height,alarm_tx,committed_height")?;
    let mut hist = create(&dir.join("latency_hist.csv"))?;
    writeln!(hist, "run,bin_start_s,count")?;
    let mut counts = create(&dir.join("counts.csv"))?;
    writeln!(
        counts,
        "run,generated,committed,rejected,dropped,confirmations,dl_overflow,ul_data_bytes,dl_data_bytes,signaling_bytes,ratio_of_totals"
    )?;

    for (label, r) in runs {
        write_per_tx_csv(create(&dir.join("per_tx").join(format!("{label}.csv")))?, &r.per_tx)?;
        if r.summary.mode == Mode::Dlt {
            write_dump(create(&dir.join("ledger").join(format!("{label}.jsonl")))?, &r.blocks)?;
        }
        if trace {
            fs::create_dir_all(dir.join("traces"))?;
            r.trace.write_to(create(&dir.join("traces").join(format!("{label}.csv")))?)?;
        }
        for a in &r.alarms {
            writeln!(
                alarms,
                "{label},{},{},{:.3},{},{},{},{}",
                a.raised_at.as_us(),
                a.sensor,
                a.mean_ppm,
                a.reading_index,
                a.trigger_height,
                a.alarm_tx.to_hex(),
                a.committed_height.map(|h| h.to_string()).unwrap_or_default()
            )?;
        }
        for bin in r.stats.iter().flat_map(|s| &s.histogram) {
            writeln!(hist, "{label},{:.1},{}", bin.start.as_secs_f64(), bin.count)?;
        }
        let s = &r.summary;
        writeln!(
            counts,
            "{label},{},{},{},{},{},{},{},{},{},{}",
            s.generated,
            s.committed,
            s.rejected,
            s.dropped,
            s.confirmations,
            s.dl_overflow,
            s.ul_data_bytes,
            s.dl_data_bytes,
            s.signaling_bytes,
            s.ratio_of_totals.map(|x| format!("{x:.6}")).unwrap_or_default()
        )?;
    }
    alarms.flush()?;
    hist.flush()?;
    counts.flush()?;
    super::plot::emit_plotdata(dir, scenario, &summaries)?;
    Ok(())
}
