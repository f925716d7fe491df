//! CSV output, one row per trial. Elapsed time is left out so that equal
//! configurations give byte-identical files.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::RunStats;

pub const COLUMNS: [&str; 21] = [
    "trial",
    "n",
    "strategy",
    "status",
    "abort_stage",
    "abort_component",
    "raw_key_len",
    "final_key_len",
    "keys_match",
    "case1_bits",
    "case3_bits",
    "case4_disclosed_bits",
    "cycle_components",
    "chain_components",
    "qubit_total",
    "group1_checks",
    "group1_passed",
    "group2_checks",
    "group2_passed",
    "case4_checks",
    "case4_passed",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn row(s: &RunStats) -> [String; 21] {
    [
        s.trial.to_string(),
        s.n.to_string(),
        s.strategy.clone(),
        s.status.to_string(),
        opt(s.abort_stage),
        opt(s.abort_component.map(|k| match k {
            crate::protocol::ComponentKind::Cycle => "CYCLE",
            crate::protocol::ComponentKind::Chain => "CHAIN",
        })),
        opt(s.raw_key_len),
        opt(s.final_key_len),
        opt(s.keys_match),
        s.case1_bits.to_string(),
        s.case3_bits.to_string(),
        s.case4_disclosed_bits.to_string(),
        s.cycle_components.to_string(),
        s.chain_components.to_string(),
        s.qubit_total.to_string(),
        s.group1_checks.to_string(),
        s.group1_passed.to_string(),
        s.group2_checks.to_string(),
        s.group2_passed.to_string(),
        s.case4_checks.to_string(),
        s.case4_passed.to_string(),
    ]
}

/// Writes header and rows to any sink.
pub fn write_csv<W: Write>(stats: &[RunStats], sink: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record(COLUMNS)?;
    for s in stats {
        w.write_record(row(s))?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(stats: &[RunStats], path: &Path) -> Result<()> {
    let io_err = |msg: String| Error::Io { path: path.display().to_string(), msg };
    let file = File::create(path).map_err(|e| io_err(e.to_string()))?;
    write_csv(stats, file).map_err(|e| io_err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::TpStrategy;
    use crate::harness::campaign::{run_campaign, CampaignConfig};

    #[test]
    fn single_trial_two_lines() {
        let c = run_campaign(&CampaignConfig::new(8, 1, TpStrategy::honest(), 3)).unwrap();
        let mut buf = Vec::new();
        write_csv(&c.stats, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("trial,n,strategy,status,"));
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn aborted_row_has_empty_key_columns() {
        let c = run_campaign(&CampaignConfig::new(32, 20, TpStrategy::naive_measure(), 3)).unwrap();
        let idx = c.stats.iter().position(|s| s.aborted()).unwrap();
        let mut buf = Vec::new();
        write_csv(&c.stats[idx..=idx], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(fields[3], "ABORTED");
        assert_eq!(fields[4], "STEP4");
        assert_eq!(fields[6], "");
        assert_eq!(fields[8], "");
    }

    #[test]
    fn unwritable_path_reports_path() {
        let err = emit_csv(&[], Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
