use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use super::usecase::Scenario;
use super::Mode;
use crate::metrics::RunSummary;

/// Mean UL/DL ratio at one (P, E) point. `e == 0` is the baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub payload_bytes: u32,
    pub e: u32,
    pub ratio: f64,
    pub runs: usize,
}

/// Mean and 95th-percentile latency at one block size. `b == 0` is the
/// baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyPoint {
    pub b: u32,
    pub mean_s: f64,
    pub p95_s: f64,
    pub runs: usize,
}

fn e_of(s: &RunSummary) -> u32 {
    if s.mode == Mode::Baseline {
        0
    } else {
        s.endorsement_e
    }
}

fn b_of(s: &RunSummary) -> u32 {
    if s.mode == Mode::Baseline {
        0
    } else {
        s.block_size_b
    }
}

/// Averages the per-run ratios over runs (typically seeds) sharing (P, E).
pub fn ratio_points(rows: &[RunSummary]) -> Vec<RatioPoint> {
    let mut acc: BTreeMap<(u32, u32), Vec<f64>> = BTreeMap::new();
    for s in rows {
        if let Some(r) = s.ratio_mean {
            acc.entry((s.payload_bytes, e_of(s))).or_default().push(r);
        }
    }
    acc.into_iter()
        .map(|((p, e), v)| RatioPoint {
            payload_bytes: p,
            e,
            ratio: v.iter().sum::<f64>() / v.len() as f64,
            runs: v.len(),
        })
        .collect()
}

/// Averages mean and p95 latency over runs sharing a block size.
pub fn latency_points(rows: &[RunSummary]) -> Vec<LatencyPoint> {
    let mut acc: BTreeMap<u32, Vec<(f64, f64)>> = BTreeMap::new();
    for s in rows {
        if let (Some(m), Some(p)) = (s.e2e_mean_s, s.e2e_p95_s) {
            acc.entry(b_of(s)).or_default().push((m, p));
        }
    }
    acc.into_iter()
        .map(|(b, v)| {
            let n = v.len() as f64;
            LatencyPoint {
                b,
                mean_s: v.iter().map(|x| x.0).sum::<f64>() / n,
                p95_s: v.iter().map(|x| x.1).sum::<f64>() / n,
                runs: v.len(),
            }
        })
        .collect()
}

const COLUMNS: &str = "\
fig5.csv   P: payload bytes; E: endorsements (0 = baseline); ratio: mean per-transaction UL/DL data bytes
fig6.csv   b: block size (0 = baseline); mean_s, p95_s: end-to-end latency in seconds
";

/// Writes the plot-ready CSV for the scenario plus a column description.
pub fn emit_plotdata(dir: &Path, scenario: Scenario, rows: &[RunSummary]) -> io::Result<()> {
    match scenario {
        Scenario::Usecase1 => {
            let mut s = String::from("P,E,ratio\n");
            for p in ratio_points(rows) {
                s.push_str(&format!("{},{},{:.6}\n", p.payload_bytes, p.e, p.ratio));
            }
            fs::write(dir.join("fig5.csv"), s)?;
        }
        Scenario::Usecase2 | Scenario::Baseline => {
            let mut s = String::from("b,mean_s,p95_s\n");
            for p in latency_points(rows) {
                s.push_str(&format!("{},{:.6},{:.6}\n", p.b, p.mean_s, p.p95_s));
            }
            fs::write(dir.join("fig6.csv"), s)?;
        }
    }
    fs::write(dir.join("plotdata_columns.txt"), COLUMNS)
}
