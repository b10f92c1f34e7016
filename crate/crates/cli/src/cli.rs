//! The `domorder` command line.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use domorder_core::simulation::{
    generate_scenario, parse_methods, BenchmarkReport, DecisionMethod, ScenarioSpec,
    DEFAULT_P1_GRID,
};
use domorder_core::{group_by_category, AnalysisConfig, CiMethod, Error, RngStream};
use thiserror::Error as ThisError;

use crate::export::{ci_table_csv, dot, AnalyzeOutput};
use crate::input::{parse_csv, write_observations, DataError};
use crate::parallel::{infer_dominance_par, run_benchmark_par};
use crate::timing::timing_benchmark;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::InvalidMixture(_) | Error::UnknownMethod(_) => {
                CliError::Usage(e.to_string())
            }
            Error::NodeSetMismatch | Error::InvalidPValue { .. } | Error::UndefinedDensity => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "domorder",
    version,
    about = "Infer a dominance ordering among categories of a numeric variable"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a `category,value` CSV file.
    Analyze(AnalyzeArgs),
    /// Write a simulated five-category dataset.
    Simulate(SimulateArgs),
    /// Run the accuracy or timing benchmark.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    /// percentile, bca or normal.
    #[arg(long, default_value = "percentile", value_parser = parse_ci)]
    ci: CiMethod,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long = "ci-table")]
    ci_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 0.01)]
    p1: f64,
    /// Rows per category.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Accuracy,
    Timing,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    #[arg(long, value_enum, default_value_t = Mode::Accuracy)]
    mode: Mode,
    /// Comma-separated decision methods (accuracy mode).
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long = "p1-grid", value_delimiter = ',')]
    p1_grid: Option<Vec<f64>>,
    /// Datasets per noise level (accuracy mode).
    #[arg(long)]
    datasets: Option<usize>,
    #[arg(long = "n-per-cat")]
    n_per_cat: Option<usize>,
    /// Comma-separated group sizes (timing mode).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional JSON copy of the full report.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_ci(s: &str) -> Result<CiMethod, String> {
    s.parse()
        .map_err(|_| format!("unknown CI method `{s}` (expected percentile, bca or normal)"))
}

fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, contents)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::Internal(format!("cannot write to standard output: {e}"))),
    }
}

fn analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let cfg = AnalysisConfig {
        alpha: args.alpha,
        reps: args.reps,
        ci_method: args.ci,
        seed: args.seed,
    };
    cfg.validate()?;
    let obs = parse_csv(&args.input)?;
    let data = group_by_category(&obs)?;
    log::info!(
        "analyzing {} rows in {} categories",
        obs.records.len(),
        data.len()
    );
    let result = infer_dominance_par(&data, &cfg)?;
    emit(args.out.as_deref(), &AnalyzeOutput::from(&result).to_json())?;
    if let Some(p) = &args.dot {
        emit(Some(p), &dot(&result))?;
    }
    if let Some(p) = &args.ci_table {
        emit(Some(p), &ci_table_csv(&result))?;
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    if !(0.0..=0.5).contains(&args.p1) {
        return Err(CliError::Usage(format!(
            "--p1 must lie in [0, 0.5], got {}",
            args.p1
        )));
    }
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let spec = ScenarioSpec {
        n_per_category: args.n,
        ..ScenarioSpec::default()
    }
    .with_p1(args.p1);
    let obs = generate_scenario(&spec, &RngStream::new(args.seed, 0))?;
    let mut buf = Vec::new();
    write_observations(&obs, &mut buf).map_err(|e| CliError::Internal(e.to_string()))?;
    emit(args.out.as_deref(), &String::from_utf8_lossy(&buf))
}

fn accuracy_csv(report: &BenchmarkReport) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["method", "p1", "precision", "recall", "f1"])
        .expect("in-memory csv write");
    for l in &report.levels {
        let p1 = l.p1.to_string();
        let row = [
            l.method.as_str(),
            &p1,
            &l.precision.to_string(),
            &l.recall.to_string(),
            &l.f1.to_string(),
        ];
        wtr.write_record(row).expect("in-memory csv write");
    }
    for a in &report.aggregate {
        let row = [
            a.method.as_str(),
            "all",
            &a.precision.to_string(),
            &a.recall.to_string(),
            &a.f1.to_string(),
        ];
        wtr.write_record(row).expect("in-memory csv write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}

fn timing_csv(report: &BenchmarkReport) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["method", "n", "seconds"])
        .expect("in-memory csv write");
    for t in &report.timings {
        wtr.write_record([t.method.as_str(), &t.n.to_string(), &t.seconds.to_string()])
            .expect("in-memory csv write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}

fn benchmark(args: BenchmarkArgs) -> Result<(), CliError> {
    let (report, csv) = match args.mode {
        Mode::Accuracy => {
            if args.sizes.is_some() {
                return Err(CliError::Usage(
                    "--sizes only applies to --mode timing".into(),
                ));
            }
            let methods = match &args.methods {
                Some(names) => parse_methods(names)?,
                None => DecisionMethod::ALL.to_vec(),
            };
            let grid = args
                .p1_grid
                .clone()
                .unwrap_or_else(|| DEFAULT_P1_GRID.to_vec());
            let spec = ScenarioSpec {
                n_per_category: args.n_per_cat.unwrap_or(100),
                ..ScenarioSpec::default()
            };
            if spec.n_per_category == 0 {
                return Err(CliError::Usage("--n-per-cat must be at least 1".into()));
            }
            let cfg = AnalysisConfig {
                reps: args.reps.unwrap_or(1000),
                seed: args.seed,
                ..AnalysisConfig::default()
            };
            let report =
                run_benchmark_par(&methods, &grid, args.datasets.unwrap_or(100), &spec, &cfg)?;
            let csv = accuracy_csv(&report);
            (report, csv)
        }
        Mode::Timing => {
            let accuracy_only = [
                ("--methods", args.methods.is_some()),
                ("--p1-grid", args.p1_grid.is_some()),
                ("--datasets", args.datasets.is_some()),
                ("--n-per-cat", args.n_per_cat.is_some()),
            ];
            if let Some((flag, _)) = accuracy_only.iter().find(|(_, set)| *set) {
                return Err(CliError::Usage(format!(
                    "{flag} only applies to --mode accuracy"
                )));
            }
            let sizes = args.sizes.clone().unwrap_or_else(|| vec![1000, 10_000]);
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(CliError::Usage("--sizes must list positive sizes".into()));
            }
            let report = timing_benchmark(&sizes, args.reps.unwrap_or(4000), args.seed)?;
            let csv = timing_csv(&report);
            (report, csv)
        }
    };
    emit(args.out.as_deref(), &csv)?;
    if let Some(p) = &args.json {
        let mut json =
            serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
        json.push('\n');
        emit(Some(p), &json)?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Errors are reported on standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Simulate(a) => simulate(a),
        Command::Benchmark(a) => benchmark(a),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("domorder: {e}");
            e.exit_code()
        }
    }
}
