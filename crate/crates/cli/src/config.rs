//! Experiment configuration documents (TOML).

use std::collections::HashSet;
use std::path::PathBuf;

use ccgbo::{AcquisitionKind, Benchmark, RunConfig};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const DEFAULT_OUTPUT_DIR: &str = "ccgbo-out";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    output_dir: Option<PathBuf>,
    parallel: Option<usize>,
    seeds: Option<Vec<u64>>,
    base_seed: Option<u64>,
    seed_count: Option<u64>,
    formats: Option<Vec<String>>,
    #[serde(default, rename = "run")]
    runs: Vec<RawRun>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    benchmark: String,
    method: String,
    budget: Option<usize>,
    k_paths: Option<usize>,
    neighbors: Option<usize>,
    half_life: Option<f64>,
    noise_variance: Option<f64>,
    lambda: Option<f64>,
    tau: Option<f64>,
    delta: Option<f64>,
    n_init: Option<usize>,
    high_d: Option<bool>,
    ard: Option<bool>,
    grid_size: Option<usize>,
    candidate_count: Option<usize>,
    nonneg_shift: Option<bool>,
    mle_restarts: Option<usize>,
    mle_max_evals: Option<usize>,
}

/// Summary table formats. Traces are always CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaryFormat {
    Json,
    Csv,
}

impl SummaryFormat {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(CliError::validation("formats", format!("unknown format {other:?}"))),
        }
    }
}

/// A fully validated experiment: every run template is crossed with every seed.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Templates carry seed 0; the sweep substitutes each seed.
    pub runs: Vec<RunConfig>,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    pub parallel: usize,
    pub formats: Vec<SummaryFormat>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs.is_empty() {
            return Err(CliError::validation("run", "at least one [[run]] table is required"));
        }
        if self.seeds.is_empty() {
            return Err(CliError::validation("seeds", "at least one seed is required"));
        }
        if self.parallel == 0 {
            return Err(CliError::validation("parallel", "must be at least 1"));
        }
        let mut seen = HashSet::new();
        for cfg in &self.runs {
            cfg.validate().map_err(|e| match e {
                ccgbo::Error::InvalidArgument { name, reason } => CliError::validation(name, reason),
                other => CliError::Core(other),
            })?;
            if !seen.insert((cfg.benchmark.name().to_string(), cfg.kind())) {
                return Err(CliError::validation(
                    "run",
                    format!("duplicate benchmark/method pair {} / {}", cfg.benchmark.name(), cfg.kind()),
                ));
            }
        }
        let mut seeds = HashSet::new();
        if let Some(s) = self.seeds.iter().find(|s| !seeds.insert(**s)) {
            return Err(CliError::validation("seeds", format!("seed {s} is listed twice")));
        }
        Ok(())
    }

    /// Replaces the method of every run template.
    pub fn override_method(&mut self, kind: AcquisitionKind) {
        for run in &mut self.runs {
            run.acquisition.kind = kind;
        }
    }

    pub fn override_benchmark(&mut self, id: &str) -> Result<()> {
        let bench = Benchmark::from_id(id)?;
        for run in &mut self.runs {
            run.benchmark = bench.clone();
        }
        Ok(())
    }
}

fn template(raw: RawRun) -> Result<RunConfig> {
    let benchmark = Benchmark::from_id(&raw.benchmark)
        .map_err(|_| CliError::validation("benchmark", format!("unknown benchmark {:?}", raw.benchmark)))?;
    let kind: AcquisitionKind = raw
        .method
        .parse()
        .map_err(|_| CliError::validation("method", format!("unknown method {:?}", raw.method)))?;
    let mut cfg = RunConfig::new(benchmark, kind, 0);
    let acq = &mut cfg.acquisition;
    macro_rules! set {
        ($($src:ident => $dst:expr),* $(,)?) => {
            $(if let Some(v) = raw.$src { $dst = v; })*
        };
    }
    set! {
        lambda => acq.lambda,
        tau => acq.tau,
        half_life => acq.half_life,
        delta => acq.delta,
        candidate_count => acq.candidate_count,
        nonneg_shift => acq.nonneg_shift,
        budget => cfg.budget,
        k_paths => cfg.proxy_paths,
        neighbors => cfg.neighbors,
        noise_variance => cfg.noise_variance,
        high_d => cfg.high_dim,
        ard => cfg.ard,
        grid_size => cfg.grid_size,
        mle_restarts => cfg.mle_restarts,
        mle_max_evals => cfg.mle_max_evals,
    }
    cfg.n_init = raw.n_init;
    Ok(cfg)
}

/// Parses and validates a TOML experiment document, filling defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawExperiment = toml::from_str(text)?;
    let seeds = match (raw.seeds, raw.base_seed, raw.seed_count) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(CliError::validation("seeds", "give either seeds or base_seed/seed_count, not both"))
        }
        (Some(s), None, None) => s,
        (None, base, count) => {
            let base = base.unwrap_or(0);
            (base..base + count.unwrap_or(1)).collect()
        }
    };
    let formats = raw
        .formats
        .unwrap_or_else(|| vec!["json".to_string()])
        .iter()
        .map(|f| SummaryFormat::parse(f))
        .collect::<Result<Vec<_>>>()?;
    let cfg = ExperimentConfig {
        runs: raw.runs.into_iter().map(template).collect::<Result<_>>()?,
        seeds,
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
        parallel: raw.parallel.unwrap_or(1),
        formats,
    };
    cfg.validate()?;
    Ok(cfg)
}
