//! Per-run trace files: one CSV row per query.

use std::fs;
use std::path::Path;

use ccgbo::metrics::{regret_traces, RegretTrace};
use ccgbo::{AcquisitionKind, RunResult};

use crate::error::{CliError, Result};

const FIXED_COLUMNS: [&str; 8] = [
    "run_id",
    "seed",
    "method",
    "benchmark",
    "iteration",
    "simple_regret",
    "cumulative_regret",
    "best_true_value",
];

pub fn run_id(benchmark: &str, method: AcquisitionKind, seed: u64) -> String {
    format!("{benchmark}__{method}__s{seed}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub run_id: String,
    pub seed: u64,
    pub method: AcquisitionKind,
    pub benchmark: String,
    pub n_init: usize,
    pub simple: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub best_true: Vec<f64>,
    /// Unit-cube query locations.
    pub queries: Vec<Vec<f64>>,
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

impl TraceRecord {
    pub fn from_result(result: &RunResult, f_star: f64) -> Result<Self> {
        let regret = regret_traces(result, f_star)?;
        Ok(Self {
            run_id: run_id(&result.benchmark, result.method, result.seed),
            seed: result.seed,
            method: result.method,
            benchmark: result.benchmark.clone(),
            n_init: result.n_init,
            simple: regret.simple,
            cumulative: regret.cumulative,
            best_true: result.best_true.clone(),
            queries: result.queries.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.simple.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simple.is_empty()
    }

    /// Rebuilds the regret trace, AUSR included.
    pub fn regret(&self) -> Result<RegretTrace> {
        let tail = &self.simple[self.n_init.saturating_sub(1)..];
        let ausr = if tail.len() >= 2 { Some(ccgbo::metrics::ausr(tail)?) } else { None };
        Ok(RegretTrace {
            simple: self.simple.clone(),
            cumulative: self.cumulative.clone(),
            n_init: self.n_init,
            ausr,
        })
    }

    /// Iteration label of row `i`: initial-design rows count up to 0,
    /// acquisitions are numbered from 1.
    fn iteration(&self, i: usize) -> i64 {
        i as i64 + 1 - self.n_init as i64
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let dim = self.queries.first().map_or(0, Vec::len);
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
        header.extend((0..dim).map(|j| format!("u{j}")));
        let csv_err = |e: csv::Error| CliError::trace(&self.run_id, e);
        w.write_record(&header).map_err(csv_err)?;
        for i in 0..self.len() {
            let mut row = vec![
                self.run_id.clone(),
                self.seed.to_string(),
                self.method.to_string(),
                self.benchmark.clone(),
                self.iteration(i).to_string(),
                float(self.simple[i]),
                float(self.cumulative[i]),
                float(self.best_true[i]),
            ];
            row.extend(self.queries[i].iter().map(|&v| float(v)));
            w.write_record(&row).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| CliError::trace(&self.run_id, e))
    }

    /// Writes `<dir>/<run_id>.csv` through a temporary file and a rename.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        let bytes = self.to_csv_bytes()?;
        let path = dir.join(format!("{}.csv", self.run_id));
        let tmp = dir.join(format!(".{}.csv.tmp", self.run_id));
        fs::write(&tmp, bytes).map_err(CliError::io(&tmp))?;
        fs::rename(&tmp, &path).map_err(CliError::io(&path))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(CliError::io(path))?;
        Self::parse(&bytes).map_err(|reason| CliError::trace(path, reason))
    }

    pub fn parse(bytes: &[u8]) -> std::result::Result<Self, String> {
        let mut r = csv::Reader::from_reader(bytes);
        let header = r.headers().map_err(|e| e.to_string())?.clone();
        if header.len() < FIXED_COLUMNS.len() || header.iter().zip(FIXED_COLUMNS).any(|(a, b)| a != b) {
            return Err("unexpected header".into());
        }
        let dim = header.len() - FIXED_COLUMNS.len();
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"));
        let mut rec: Option<Self> = None;
        for (i, row) in r.records().enumerate() {
            let row = row.map_err(|e| e.to_string())?;
            let rec = rec.get_or_insert_with(|| Self {
                run_id: row[0].to_string(),
                seed: 0,
                method: AcquisitionKind::Random,
                benchmark: row[3].to_string(),
                n_init: 0,
                simple: Vec::new(),
                cumulative: Vec::new(),
                best_true: Vec::new(),
                queries: Vec::new(),
            });
            if row[0] != rec.run_id || row[3] != rec.benchmark {
                return Err(format!("row {} belongs to another run", i + 1));
            }
            rec.seed = row[1].parse().map_err(|e| format!("bad seed: {e}"))?;
            rec.method = row[2].parse().map_err(|e| format!("bad method: {e}"))?;
            let iteration: i64 = row[4].parse().map_err(|e| format!("bad iteration: {e}"))?;
            if iteration <= 0 {
                rec.n_init += 1;
            }
            rec.simple.push(num(&row[5])?);
            rec.cumulative.push(num(&row[6])?);
            rec.best_true.push(num(&row[7])?);
            rec.queries.push((0..dim).map(|j| num(&row[8 + j])).collect::<std::result::Result<_, _>>()?);
        }
        rec.ok_or_else(|| "trace has no rows".into())
    }
}
