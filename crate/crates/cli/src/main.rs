use std::path::PathBuf;
use std::process::ExitCode;

use ccgbo::{AcquisitionKind, Benchmark};
use ccgbo_cli::summary::{table_csv, table_json};
use ccgbo_cli::{parse_config, run_experiment, summarize_dir, CliError};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ccgbo", version, about = "Credit-guided Bayesian optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run every template of a config across its seeds.
    Run {
        config: PathBuf,
        /// Run a single seed.
        #[arg(long, conflicts_with = "seeds")]
        seed: Option<u64>,
        /// Comma-separated seed list.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace the method of every run template.
        #[arg(long)]
        method: Option<AcquisitionKind>,
        /// Replace the benchmark of every run template.
        #[arg(long)]
        benchmark: Option<String>,
    },
    /// Summarize the traces of a finished experiment directory.
    Summarize {
        dir: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Show the registered benchmarks.
    ListBenchmarks,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            seed,
            seeds,
            parallel,
            out,
            method,
            benchmark,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|source| CliError::Io { path: config, source })?;
            let mut cfg = parse_config(&text)?;
            if let Some(s) = seed {
                cfg.seeds = vec![s];
            }
            if let Some(s) = seeds {
                cfg.seeds = s;
            }
            if let Some(p) = parallel {
                cfg.parallel = p;
            }
            if let Some(o) = out {
                cfg.output_dir = o;
            }
            if let Some(m) = method {
                cfg.override_method(m);
            }
            if let Some(b) = benchmark {
                cfg.override_benchmark(&b)?;
            }
            let report = run_experiment(&cfg)?;
            for f in &report.failures {
                eprintln!("run {} failed: {}", f.run_id, f.error);
            }
            for s in &report.summaries {
                println!(
                    "{:<20} {:<12} runs={:<3} ausr={:.4} ± {:.4}  final={:.4} ± {:.4}",
                    s.benchmark, s.method, s.runs, s.ausr_mean, s.ausr_std, s.final_simple_mean, s.final_simple_stderr
                );
            }
            println!("wrote {} traces to {}", report.records.len(), report.output_dir.display());
            report.into_result().map(|_| ())
        }
        Command::Summarize { dir, format } => {
            let rows = summarize_dir(&dir)?;
            match format {
                TableFormat::Json => println!("{}", table_json(&rows)?),
                TableFormat::Csv => print!("{}", table_csv(&rows)),
            }
            Ok(())
        }
        Command::ListBenchmarks => {
            println!("{:<14} {:>4} {:>22}  box", "id", "dim", "f*");
            for b in Benchmark::suite() {
                let (lo, hi) = b.bounds()[0];
                println!("{:<14} {:>4} {:>22.15}  [{lo}, {hi}]^{}", b.name(), b.dim(), b.f_star(), b.dim());
            }
            println!("\nembedded variants: <id>_<D>, e.g. levy4_1000 (extra coordinates in [0, 1])");
            println!("methods: {}", AcquisitionKind::ALL.map(|k| k.as_str()).join(", "));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
