//! Per (benchmark, method) summaries of trace records.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use ccgbo::metrics::aggregate;
use serde::Serialize;

use crate::config::SummaryFormat;
use crate::error::{CliError, Result};
use crate::trace::TraceRecord;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub benchmark: String,
    pub method: String,
    pub runs: usize,
    pub seeds: Vec<u64>,
    /// Rows per trace, initial design included.
    pub queries: usize,
    pub n_init: usize,
    pub ausr_mean: f64,
    pub ausr_std: f64,
    pub final_simple_mean: f64,
    pub final_simple_stderr: f64,
    pub simple_mean: Vec<f64>,
    pub simple_stderr: Vec<f64>,
}

/// Groups records by benchmark and method; groups come out sorted.
pub fn summarize_records(records: &[TraceRecord]) -> Result<Vec<SummaryRow>> {
    let mut groups: BTreeMap<(String, String), Vec<&TraceRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.benchmark.clone(), r.method.to_string()))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((benchmark, method), mut group)| {
            group.sort_by_key(|r| r.seed);
            let expected = group[0].len();
            if let Some(r) = group.iter().find(|r| r.len() != expected) {
                return Err(CliError::Ragged {
                    run_id: r.run_id.clone(),
                    got: r.len(),
                    expected,
                });
            }
            let traces = group.iter().map(|r| r.regret()).collect::<Result<Vec<_>>>()?;
            let agg = aggregate(&traces)?;
            Ok(SummaryRow {
                benchmark,
                method,
                runs: agg.runs,
                seeds: group.iter().map(|r| r.seed).collect(),
                queries: expected,
                n_init: group[0].n_init,
                ausr_mean: agg.ausr.mean,
                ausr_std: agg.ausr.std,
                final_simple_mean: agg.final_simple.mean,
                final_simple_stderr: agg.final_simple.stderr,
                simple_mean: agg.simple_mean,
                simple_stderr: agg.simple_stderr,
            })
        })
        .collect()
}

/// Trace files under `dir/traces`, or directly in `dir` when it has no
/// `traces` subdirectory. Sorted by path.
pub fn trace_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let nested = dir.join("traces");
    let root = if nested.is_dir() { nested } else { dir.to_path_buf() };
    let mut files: Vec<PathBuf> = fs::read_dir(&root)
        .map_err(CliError::io(&root))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv") && p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

pub fn summarize_dir(dir: &Path) -> Result<Vec<SummaryRow>> {
    let files = trace_files(dir)?;
    if files.is_empty() {
        return Err(CliError::NoRuns(dir.to_path_buf()));
    }
    let records = files.iter().map(|p| TraceRecord::read(p)).collect::<Result<Vec<_>>>()?;
    summarize_records(&records)
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

#[derive(Serialize)]
struct Stamped<'a> {
    generated_at_unix: u64,
    #[serde(flatten)]
    row: &'a SummaryRow,
}

pub fn table_json(rows: &[SummaryRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)?)
}

pub fn table_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("benchmark,method,runs,ausr_mean,ausr_std,final_simple_mean,final_simple_stderr\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:.12e},{:.12e},{:.12e},{:.12e}\n",
            r.benchmark, r.method, r.runs, r.ausr_mean, r.ausr_std, r.final_simple_mean, r.final_simple_stderr
        ));
    }
    out
}

/// Writes one JSON summary per group into `dir`, plus a combined table for
/// each requested format.
pub fn write_summaries(rows: &[SummaryRow], dir: &Path, formats: &[SummaryFormat]) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let now = unix_now();
    for row in rows {
        let path = dir.join(format!("{}__{}.json", row.benchmark, row.method));
        let text = serde_json::to_string_pretty(&Stamped {
            generated_at_unix: now,
            row,
        })?;
        fs::write(&path, text).map_err(CliError::io(&path))?;
    }
    for format in formats {
        let (name, text) = match format {
            SummaryFormat::Json => ("table.json", table_json(rows)?),
            SummaryFormat::Csv => ("table.csv", table_csv(rows)),
        };
        let path = dir.join(name);
        fs::write(&path, text).map_err(CliError::io(&path))?;
    }
    Ok(())
}
