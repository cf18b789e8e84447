use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::{MetricsError, PerTxRow, RunSummary};

pub const SUMMARY_HEADER: [&str; 13] = [
    "scenario",
    "seed",
    "P_bytes",
    "E",
    "b",
    "mode",
    "ratio_mean",
    "e2e_mean_s",
    "e2e_p95_s",
    "committed",
    "rejected",
    "ra_failures",
    "blocks",
];

pub const PER_TX_HEADER: [&str; 7] = [
    "tx_id",
    "ue",
    "t_gen_us",
    "t_commit_us",
    "t_confirm_us",
    "ul_bytes",
    "dl_bytes",
];

fn opt_f(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn opt_u<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_summary_csv<W: Write>(w: W, rows: &[RunSummary]) -> Result<(), MetricsError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SUMMARY_HEADER)?;
    for s in rows {
        out.write_record([
            s.scenario.clone(),
            s.seed.to_string(),
            s.payload_bytes.to_string(),
            s.endorsement_e.to_string(),
            s.block_size_b.to_string(),
            s.mode.name().to_string(),
            opt_f(s.ratio_mean),
            opt_f(s.e2e_mean_s),
            opt_f(s.e2e_p95_s),
            s.committed.to_string(),
            s.rejected.to_string(),
            s.ra_failures.to_string(),
            s.blocks.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_per_tx_csv<W: Write>(w: W, rows: &[PerTxRow]) -> Result<(), MetricsError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(PER_TX_HEADER)?;
    for r in rows {
        out.write_record([
            r.tx_id.to_hex(),
            r.ue.to_string(),
            r.t_gen.as_us().to_string(),
            opt_u(r.t_commit.map(|t| t.as_us())),
            opt_u(r.t_confirm.map(|t| t.as_us())),
            r.ul_bytes.to_string(),
            r.dl_bytes.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `summary.csv` and `per_tx.csv` into `dir`.
pub fn export_csv(dir: &Path, summary: &RunSummary, per_tx: &[PerTxRow]) -> Result<(), MetricsError> {
    std::fs::create_dir_all(dir)?;
    write_summary_csv(BufWriter::new(File::create(dir.join("summary.csv"))?), std::slice::from_ref(summary))?;
    write_per_tx_csv(BufWriter::new(File::create(dir.join("per_tx.csv"))?), per_tx)?;
    Ok(())
}

/// Reads back a summary CSV as raw string records (header excluded).
pub fn read_summary_csv<R: Read>(r: R) -> Result<Vec<Vec<String>>, MetricsError> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        rows.push(rec?.iter().map(str::to_owned).collect());
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_per_tx_is_header_only() {
        let mut buf = Vec::new();
        write_per_tx_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "tx_id,ue,t_gen_us,t_commit_us,t_confirm_us,ul_bytes,dl_bytes\n"
        );
    }

    #[test]
    fn empty_summary_is_header_only() {
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "scenario,seed,P_bytes,E,b,mode,ratio_mean,e2e_mean_s,e2e_p95_s,committed,rejected,ra_failures,blocks\n"
        );
    }

    #[test]
    fn unwritable_path_errors() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("f");
        std::fs::write(&file, b"x").unwrap();
        // A regular file cannot be used as the output directory.
        let s = RunSummary {
            scenario: "s".into(),
            seed: 0,
            payload_bytes: 50,
            endorsement_e: 0,
            block_size_b: 0,
            mode: crate::scenario::Mode::Baseline,
            ratio_mean: None,
            ratio_of_totals: None,
            e2e_mean_s: None,
            e2e_p95_s: None,
            generated: 0,
            committed: 0,
            rejected: 0,
            dropped: 0,
            ra_failures: 0,
            blocks: 0,
            alarms: 0,
            confirmations: 0,
            dl_overflow: 0,
            ul_data_bytes: 0,
            dl_data_bytes: 0,
            signaling_bytes: 0,
        };
        assert!(export_csv(&file.join("sub"), &s, &[]).is_err());
    }
}
