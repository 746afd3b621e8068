use std::fs;
use std::path::{Path, PathBuf};

use ccgbo::RunConfig;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::summary::{summarize_records, write_summaries, SummaryRow};
use crate::trace::{run_id, TraceRecord};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunFailure {
    pub run_id: String,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    /// Successful runs in template-major, seed-minor order.
    pub records: Vec<TraceRecord>,
    pub failures: Vec<RunFailure>,
    pub summaries: Vec<SummaryRow>,
    pub output_dir: PathBuf,
}

impl ExperimentReport {
    pub fn succeeded(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        if self.failures.is_empty() {
            Ok(self)
        } else {
            Err(CliError::RunsFailed {
                failed: self.failures.len(),
                total: self.failures.len() + self.records.len(),
            })
        }
    }
}

pub fn traces_dir(output_dir: &Path) -> PathBuf {
    output_dir.join("traces")
}

pub fn summaries_dir(output_dir: &Path) -> PathBuf {
    output_dir.join("summaries")
}

fn prepare_output(dir: &Path) -> Result<()> {
    for d in [traces_dir(dir), summaries_dir(dir)] {
        fs::create_dir_all(&d).map_err(CliError::io(&d))?;
    }
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(CliError::io(&probe))?;
    fs::remove_file(&probe).map_err(CliError::io(&probe))
}

/// Every (template, seed) pair, template-major.
pub fn expand_jobs(cfg: &ExperimentConfig) -> Vec<RunConfig> {
    cfg.runs
        .iter()
        .flat_map(|t| {
            cfg.seeds.iter().map(move |&seed| RunConfig {
                seed,
                ..t.clone()
            })
        })
        .collect()
}

fn execute(job: &RunConfig, traces: &Path) -> std::result::Result<TraceRecord, String> {
    let result = ccgbo::run(job).map_err(|e| e.to_string())?;
    let record = TraceRecord::from_result(&result, job.benchmark.f_star()).map_err(|e| e.to_string())?;
    record.write_to_dir(traces).map_err(|e| e.to_string())?;
    Ok(record)
}

/// Runs the sweep, persisting each trace as soon as its run completes, then
/// writes the summaries. Run failures are collected, not propagated.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    prepare_output(&cfg.output_dir)?;
    let traces = traces_dir(&cfg.output_dir);
    let jobs = expand_jobs(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel)
        .build()
        .map_err(|e| CliError::validation("parallel", e.to_string()))?;
    let outcomes: Vec<_> = pool.install(|| jobs.par_iter().map(|job| execute(job, &traces)).collect());

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (job, outcome) in jobs.iter().zip(outcomes) {
        match outcome {
            Ok(r) => records.push(r),
            Err(error) => failures.push(RunFailure {
                run_id: run_id(job.benchmark.name(), job.kind(), job.seed),
                error,
            }),
        }
    }

    let failure_log = cfg.output_dir.join("failures.json");
    if failures.is_empty() {
        if failure_log.exists() {
            fs::remove_file(&failure_log).map_err(CliError::io(&failure_log))?;
        }
    } else {
        fs::write(&failure_log, serde_json::to_string_pretty(&failures)?).map_err(CliError::io(&failure_log))?;
    }

    let summaries = if records.is_empty() { Vec::new() } else { summarize_records(&records)? };
    write_summaries(&summaries, &summaries_dir(&cfg.output_dir), &cfg.formats)?;
    Ok(ExperimentReport {
        records,
        failures,
        summaries,
        output_dir: cfg.output_dir.clone(),
    })
}
