use std::collections::BTreeMap;

use loewner_core::ResultId;

use crate::config::Format;
use crate::suite::{SuiteReport, Tally, TrialRecord};

/// JSON (pretty, fields in declaration order, shortest round-trip floats)
/// or CSV (header plus one row per trial).
pub fn emit_report(report: &SuiteReport, format: Format) -> anyhow::Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if report.trials.is_empty() {
                w.write_record(CSV_HEADER)?;
            }
            for row in &report.trials {
                w.serialize(row)?;
            }
            Ok(w.into_inner()?)
        }
    }
}

const CSV_HEADER: [&str; 10] = [
    "result",
    "family",
    "bounds",
    "map",
    "dim",
    "trial",
    "seed",
    "status",
    "min_gap",
    "tightest_ratio",
];

pub fn parse_json_report(bytes: &[u8]) -> anyhow::Result<SuiteReport> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn parse_csv_rows(bytes: &[u8]) -> anyhow::Result<Vec<TrialRecord>> {
    let mut r = csv::Reader::from_reader(bytes);
    let mut rows = Vec::new();
    for row in r.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

/// Per-result tallies recomputed from trial rows, in order of first
/// appearance.
pub fn tallies_from_rows(rows: &[TrialRecord]) -> Vec<(ResultId, Tally)> {
    let mut order = Vec::new();
    let mut by_result: BTreeMap<ResultId, Tally> = BTreeMap::new();
    for row in rows {
        if !by_result.contains_key(&row.result) {
            order.push(row.result);
        }
        by_result.entry(row.result).or_default().add(row);
    }
    order
        .into_iter()
        .map(|r| (r, by_result.remove(&r).expect("seen")))
        .collect()
}

/// Human-readable summary, one line per result.
pub fn summary(report: &SuiteReport) -> String {
    let mut out = String::new();
    for agg in &report.results {
        let t = &agg.tally;
        out.push_str(&format!(
            "{:<22} trials {:>7}  pass {:>7}  marginal {:>4}  fail {:>4}  worst gap {:>11}  skipped cells {}\n",
            agg.result.as_str(),
            t.trials,
            t.passes,
            t.marginal,
            t.failures,
            t.worst_gap.map(|g| format!("{g:.3e}")).unwrap_or_else(|| "-".into()),
            agg.skipped_cells.len(),
        ));
    }
    out.push_str(&format!("wall time {:.2}s\n", report.wall_time_secs));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SuiteConfig;
    use crate::suite::run_suite;

    fn report() -> SuiteReport {
        run_suite(&SuiteConfig {
            results: vec![ResultId::MondPecaric, ResultId::HarmonicMean],
            dims: vec![2],
            trials_per_result: 2,
            ..SuiteConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn json_round_trip_keeps_aggregates() {
        let r = report();
        let back = parse_json_report(&emit_report(&r, Format::Json).unwrap()).unwrap();
        assert_eq!(back.results, r.results);
        assert_eq!(back.config, r.config);
    }

    #[test]
    fn csv_has_one_row_per_trial_and_round_trips() {
        let r = report();
        let bytes = emit_report(&r, Format::Csv).unwrap();
        let lines = bytes.iter().filter(|b| **b == b'\n').count();
        assert_eq!(lines, r.trials.len() + 1);
        let rows = parse_csv_rows(&bytes).unwrap();
        assert_eq!(rows, r.trials);
        let tallies = tallies_from_rows(&rows);
        for (agg, (id, t)) in r.results.iter().zip(tallies) {
            assert_eq!(agg.result, id);
            assert_eq!(agg.tally, t);
        }
    }

    #[test]
    fn empty_report_is_valid() {
        let r = SuiteReport {
            version: "0".into(),
            config: SuiteConfig::default(),
            wall_time_secs: 0.0,
            results: Vec::new(),
            failures: Vec::new(),
            trials: Vec::new(),
        };
        let json = emit_report(&r, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v["results"].as_array().unwrap().len(), 0);
        let csv = emit_report(&r, Format::Csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 1);
    }
}
