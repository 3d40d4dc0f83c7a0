//! Randomized verification suite, constant tables and report plumbing for
//! `loewner-core`.

pub mod config;
pub mod constants;
pub mod report;
pub mod suite;

use loewner_core::oracle::{compare_with_oracle, OracleReport, ORACLE_POINTS};
use loewner_core::{check_cell, run_instance, ChainReport, Instance, MapFamily};

pub use config::{ConfigError, Format, SuiteConfig};
pub use constants::{constants_table, ConstantsRow};
pub use report::emit_report;
pub use suite::{run_suite, SuiteReport};

/// Scalar-oracle comparison for every valid (result, family, bounds) cell of
/// `config`.
pub fn run_oracle(config: &SuiteConfig, points: usize) -> anyhow::Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    for &result in &config.results {
        for family in config.functions_for(result) {
            for &bounds in &config.bounds {
                if check_cell(result, family, bounds, MapFamily::Identity).is_err() {
                    continue;
                }
                out.push(compare_with_oracle(result, family, bounds, points)?);
            }
        }
    }
    Ok(out)
}

pub const DEFAULT_ORACLE_POINTS: usize = ORACLE_POINTS;

/// Instances found in a dump file: a bare instance, one failure dump, or a
/// whole suite report.
pub fn read_instances(text: &str) -> anyhow::Result<Vec<Instance>> {
    if let Ok(inst) = serde_json::from_str::<Instance>(text) {
        return Ok(vec![inst]);
    }
    if let Ok(dump) = serde_json::from_str::<suite::FailureDump>(text) {
        return Ok(vec![dump.instance]);
    }
    let report: SuiteReport = serde_json::from_str(text)
        .map_err(|e| anyhow::anyhow!("not an instance, failure dump or suite report: {e}"))?;
    Ok(report.failures.into_iter().map(|d| d.instance).collect())
}

pub fn replay(inst: &Instance) -> loewner_core::Result<ChainReport> {
    run_instance(inst)
}
