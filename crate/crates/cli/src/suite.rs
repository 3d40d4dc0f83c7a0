use std::collections::BTreeMap;
use std::time::Instant;

use loewner_core::{
    check_cell, random_instance, run_instance, ChainReport, FamilySpec, Instance, MapFamily, ResultId, SpectrumBound,
    Status,
};
use rayon::prelude::*;

use crate::config::{ConfigError, SuiteConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Pass,
    Marginal,
    Violation,
    /// The builder returned an error; counted as a failure.
    Error,
}

impl TrialStatus {
    pub fn is_failure(&self) -> bool {
        matches!(self, TrialStatus::Violation | TrialStatus::Error)
    }
}

/// One row per trial; this is also the CSV layout.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TrialRecord {
    pub result: ResultId,
    pub family: String,
    pub bounds: String,
    pub map: MapFamily,
    pub dim: usize,
    pub trial: usize,
    pub seed: u64,
    pub status: TrialStatus,
    pub min_gap: Option<f64>,
    pub tightest_ratio: Option<f64>,
}

/// Counts and extremes recomputable from the trial rows.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tally {
    pub trials: usize,
    pub passes: usize,
    pub marginal: usize,
    pub failures: usize,
    /// Smallest `lambda_min(T_{i+1} - T_i)` over all steps and trials.
    pub worst_gap: Option<f64>,
    /// Smallest gap measured in units of its tolerance.
    pub tightest_ratio: Option<f64>,
}

impl Tally {
    pub fn add(&mut self, r: &TrialRecord) {
        self.trials += 1;
        match r.status {
            TrialStatus::Pass => self.passes += 1,
            TrialStatus::Marginal => self.marginal += 1,
            TrialStatus::Violation | TrialStatus::Error => self.failures += 1,
        }
        let min = |acc: Option<f64>, v: Option<f64>| match (acc, v) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.worst_gap = min(self.worst_gap, r.min_gap);
        self.tightest_ratio = min(self.tightest_ratio, r.tightest_ratio);
    }
}

/// A (result, family, bounds, map) combination outside the hypotheses of
/// its chain.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SkippedCell {
    pub family: FamilySpec,
    pub bounds: SpectrumBound,
    pub map: MapFamily,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CellConstants {
    pub family: FamilySpec,
    pub bounds: SpectrumBound,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ResultAggregate {
    pub result: ResultId,
    #[serde(flatten)]
    pub tally: Tally,
    pub skipped_cells: Vec<SkippedCell>,
    pub constants: Vec<CellConstants>,
}

/// Everything needed to replay a failing trial.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FailureDump {
    pub instance: Instance,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SuiteReport {
    pub version: String,
    pub config: SuiteConfig,
    pub wall_time_secs: f64,
    pub results: Vec<ResultAggregate>,
    pub failures: Vec<FailureDump>,
    /// Per-trial rows, emitted in CSV form only.
    #[serde(skip)]
    pub trials: Vec<TrialRecord>,
}

impl SuiteReport {
    pub fn total(&self) -> Tally {
        let mut t = Tally::default();
        for r in &self.trials {
            t.add(r);
        }
        t
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.tally.failures == 0)
    }

    /// Process exit code: 0 when nothing failed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Job {
    result: ResultId,
    family: FamilySpec,
    bounds: SpectrumBound,
    map: MapFamily,
    dim: usize,
    trial: usize,
    seed: u64,
}

struct Outcome {
    record: TrialRecord,
    dump: Option<FailureDump>,
    constants: Option<BTreeMap<String, f64>>,
}

fn run_job(job: &Job, rtol: f64, keep_constants: bool) -> Outcome {
    let mut instance = random_instance(job.result, job.family, job.bounds, job.map, job.dim, job.seed);
    instance.options.rtol = rtol;
    let outcome = run_instance(&instance);
    let record = |status, min_gap, tightest_ratio| TrialRecord {
        result: job.result,
        family: job.family.to_string(),
        bounds: job.bounds.to_string(),
        map: job.map,
        dim: job.dim,
        trial: job.trial,
        seed: job.seed,
        status,
        min_gap,
        tightest_ratio,
    };
    match outcome {
        Ok(report) => {
            let status = match report.status() {
                Status::Pass => TrialStatus::Pass,
                Status::Marginal => TrialStatus::Marginal,
                Status::Violation => TrialStatus::Violation,
            };
            let constants = keep_constants
                .then(|| report.constants.iter().map(|(k, c)| (k.to_string(), c.value)).collect());
            Outcome {
                record: record(status, Some(report.min_gap()), Some(report.tightest_ratio())),
                dump: status.is_failure().then(|| FailureDump {
                    instance,
                    report: Some(report),
                    error: None,
                }),
                constants,
            }
        }
        Err(e) => Outcome {
            record: record(TrialStatus::Error, None, None),
            dump: Some(FailureDump {
                instance,
                report: None,
                error: Some(e.to_string()),
            }),
            constants: None,
        },
    }
}

/// Runs every valid (result, family, bounds, map, dim) cell for
/// `trials_per_result` trials. Trial `i` in enumeration order uses seed
/// `seed + i`; trials run in parallel and are merged in that order.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, ConfigError> {
    config.validate()?;
    let start = Instant::now();
    let mut jobs = Vec::new();
    let mut skipped: BTreeMap<ResultId, Vec<SkippedCell>> = BTreeMap::new();
    let mut next_seed = config.seed;
    for &result in &config.results {
        for family in config.functions_for(result) {
            for &bounds in &config.bounds {
                for map in config.maps_for(result) {
                    if let Err(e) = check_cell(result, family, bounds, map) {
                        skipped.entry(result).or_default().push(SkippedCell {
                            family,
                            bounds,
                            map,
                            reason: e.to_string(),
                        });
                        continue;
                    }
                    for &dim in &config.dims {
                        for trial in 0..config.trials_per_result {
                            jobs.push(Job {
                                result,
                                family,
                                bounds,
                                map,
                                dim,
                                trial,
                                seed: next_seed,
                            });
                            next_seed = next_seed.wrapping_add(1);
                        }
                    }
                }
            }
        }
    }

    let first_dim = config.dims[0];
    let outcomes: Vec<Outcome> = jobs
        .par_iter()
        .map(|job| run_job(job, config.rtol, job.trial == 0 && job.dim == first_dim))
        .collect();

    let mut results: Vec<ResultAggregate> = config
        .results
        .iter()
        .map(|&result| ResultAggregate {
            result,
            tally: Tally::default(),
            skipped_cells: skipped.remove(&result).unwrap_or_default(),
            constants: Vec::new(),
        })
        .collect();
    let mut failures = Vec::new();
    let mut trials = Vec::with_capacity(outcomes.len());
    for (job, outcome) in jobs.iter().zip(outcomes) {
        let agg = results
            .iter_mut()
            .find(|a| a.result == job.result)
            .expect("aggregate for every selected result");
        agg.tally.add(&outcome.record);
        if let Some(values) = outcome.constants {
            let seen = agg
                .constants
                .iter()
                .any(|c| c.family == job.family && c.bounds == job.bounds);
            if !seen {
                agg.constants.push(CellConstants {
                    family: job.family,
                    bounds: job.bounds,
                    values,
                });
            }
        }
        failures.extend(outcome.dump);
        trials.push(outcome.record);
    }

    Ok(SuiteReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        wall_time_secs: start.elapsed().as_secs_f64(),
        results,
        failures,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            results: vec![ResultId::InverseReverse, ResultId::GeometricMean],
            dims: vec![1, 3],
            trials_per_result: 3,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn tallies_add_up() {
        let r = run_suite(&small()).unwrap();
        for agg in &r.results {
            let t = &agg.tally;
            assert_eq!(t.passes + t.marginal + t.failures, t.trials);
            assert!(t.trials > 0);
        }
        assert_eq!(r.total().trials, r.trials.len());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn invalid_cells_are_recorded() {
        let mut c = small();
        c.results = vec![ResultId::HarmonicMean];
        c.maps = vec![MapFamily::Trace];
        let r = run_suite(&c).unwrap();
        let skipped = &r.results[0].skipped_cells;
        assert!(skipped.iter().all(|s| s.bounds.lower() < 1.0));
        assert_eq!(skipped.len(), 2);
    }

    #[test]
    fn zero_trials_is_a_config_error() {
        let mut c = small();
        c.trials_per_result = 0;
        assert_eq!(run_suite(&c).unwrap_err().field, "trials");
    }
}
