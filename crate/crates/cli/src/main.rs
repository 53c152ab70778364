//! `ovl`: estimate overlap coefficients from labeled samples, simulate the
//! reference mixtures, run convergence sweeps and print ground truth.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 malformed input, 3 invalid
//! flags or configuration.

mod input;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use ovl_core::estimator::{self, Algorithm, EstimateResult};
use ovl_core::experiments::{
    format_sig12, records_to_csv, run_sweep, summarize, Case, ExperimentConfig, Protocol, DEFAULT_TRIALS,
};
use ovl_core::{Error as CoreError, OracleResult};
use serde::Serialize;

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "ovl", version, about = "Overlap coefficient estimation by misclassification-impurity splits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the overlap from an `x,label` CSV file.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        /// Number of density crossovers; 0 gives the smaller empirical prior.
        #[arg(long)]
        crossovers: usize,
        #[arg(long, default_value = "dp", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a labeled sample from a reference mixture.
    Simulate {
        #[arg(long)]
        case: u32,
        #[arg(long = "n")]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sample CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeated estimation over growing sample sizes.
    Sweep {
        #[arg(long)]
        case: u32,
        #[arg(long, value_delimiter = ',', default_values_t = ovl_core::experiments::DEFAULT_SIZES)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "nested", value_parser = parse_protocol)]
        protocol: Protocol,
        #[arg(long, default_value = "dp", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        /// Trial CSV destination; the summary goes next to it as `<stem>.summary.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the exact crossovers and overlap of a reference case.
    Oracle {
        #[arg(long)]
        case: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

fn parse_protocol(s: &str) -> Result<Protocol, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

#[derive(Serialize)]
struct Envelope<C, P> {
    schema_version: &'static str,
    command: &'static str,
    config: C,
    payload: P,
}

impl<C: Serialize, P: Serialize> Envelope<C, P> {
    fn new(command: &'static str, config: C, payload: P) -> Self {
        Envelope { schema_version: SCHEMA_VERSION, command, config, payload }
    }

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }
}

enum Failure {
    Io(anyhow::Error),
    Input(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Input(_) => 2,
            Failure::Usage(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn case_from_id(id: u32) -> Result<Case, Failure> {
    Case::from_id(id).map_err(|e| Failure::Usage(e.to_string()))
}

/// Writes `text` to `path`, or stdout when there is no path.
fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

#[derive(Serialize)]
struct EstimateConfig<'a> {
    input: &'a Path,
    crossovers: usize,
    algorithm: Algorithm,
}

fn estimate_csv(r: &EstimateResult) -> String {
    let mut header = vec!["n_crossovers".to_string()];
    header.extend((1..=r.n_crossovers).map(|k| format!("v_hat_{k}")));
    header.extend(["rho_hat", "h_hat", "pi1_hat", "pi2_hat", "n_samples", "algorithm"].map(String::from));
    let mut row = vec![r.n_crossovers.to_string()];
    row.extend(r.v_hat.iter().map(|&v| format_sig12(v)));
    row.extend([r.rho_hat, r.h_at_optimum, r.pi_hat.0, r.pi_hat.1].map(format_sig12));
    row.extend([r.n_samples.to_string(), r.algorithm.to_string()]);
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn cmd_estimate(input: &Path, crossovers: usize, algorithm: Algorithm, format: Format, out: Option<&Path>) -> Outcome {
    let file = File::open(input).map_err(|e| Failure::Input(format!("{}: {e}", input.display())))?;
    let ds = input::read_dataset(io::BufReader::new(file))
        .map_err(|e| Failure::Input(format!("{}: {e}", input.display())))?;
    let result = estimator::estimate(&ds, crossovers, algorithm).map_err(|e| match e {
        CoreError::TooManyTuples { .. } | CoreError::InvalidParameter(_) => Failure::Usage(e.to_string()),
        other => Failure::Input(other.to_string()),
    })?;
    let text = match format {
        Format::Json => Envelope::new("estimate", EstimateConfig { input, crossovers, algorithm }, &result).to_json(),
        Format::Csv => estimate_csv(&result),
    };
    emit(out, &text)?;
    Ok(())
}

#[derive(Serialize)]
struct SimulateConfig {
    case: u32,
    n: usize,
    seed: u64,
}

fn cmd_simulate(case_id: u32, n: usize, seed: u64, out: Option<&Path>) -> Outcome {
    let case = case_from_id(case_id)?;
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let samples = case.mixture().sample_labeled(n, seed).map_err(|e| Failure::Usage(e.to_string()))?;
    let oracle = case.oracle().map_err(|e| Failure::Usage(e.to_string()))?;
    let summary = Envelope::new("simulate", SimulateConfig { case: case_id, n, seed }, oracle).to_json();
    match out {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            input::write_samples(BufWriter::new(file), &samples).with_context(|| format!("writing {}", p.display()))?;
            emit(None, &summary)?;
        }
        None => {
            input::write_samples(io::stdout().lock(), &samples).context("writing to stdout")?;
            io::stderr().lock().write_all(summary.as_bytes()).context("writing to stderr")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepConfig<'a> {
    case: u32,
    sizes: &'a [usize],
    trials: usize,
    seed: u64,
    protocol: Protocol,
    algorithm: Algorithm,
}

#[derive(Serialize)]
struct SweepPayload {
    oracle: OracleResult,
    summaries: Vec<ovl_core::experiments::SizeSummary>,
}

fn summary_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sweep".into());
    csv.with_file_name(format!("{stem}.summary.json"))
}

fn cmd_sweep(case_id: u32, cfg: ExperimentConfig, out: Option<&Path>) -> Outcome {
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let oracle = cfg.case.oracle().map_err(|e| Failure::Usage(e.to_string()))?;
    let records = run_sweep(&cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    let summaries = summarize(&records).map_err(|e| Failure::Usage(e.to_string()))?;
    let csv = records_to_csv(&records, oracle.crossovers.len());
    let config = SweepConfig {
        case: case_id,
        sizes: &cfg.sizes,
        trials: cfg.trials,
        seed: cfg.seed,
        protocol: cfg.protocol,
        algorithm: cfg.algorithm,
    };
    let summary = Envelope::new("sweep", config, SweepPayload { oracle, summaries }).to_json();
    match out {
        Some(p) => {
            emit(Some(p), &csv)?;
            emit(Some(&summary_path(p)), &summary)?;
            emit(None, &summary)?;
        }
        None => {
            emit(None, &csv)?;
            io::stderr().lock().write_all(summary.as_bytes()).context("writing to stderr")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleConfig {
    case: u32,
}

fn cmd_oracle(case_id: u32) -> Outcome {
    let oracle = case_from_id(case_id)?.oracle().map_err(|e| Failure::Usage(e.to_string()))?;
    emit(None, &Envelope::new("oracle", OracleConfig { case: case_id }, oracle).to_json())?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Estimate { input, crossovers, algorithm, format, out } => {
            cmd_estimate(&input, crossovers, algorithm, format, out.as_deref())
        }
        Command::Simulate { case, n, seed, out } => cmd_simulate(case, n, seed, out.as_deref()),
        Command::Sweep { case, sizes, trials, seed, protocol, algorithm, out } => {
            let cfg = ExperimentConfig { case: case_from_id(case)?, sizes, trials, seed, protocol, algorithm };
            cmd_sweep(case, cfg, out.as_deref())
        }
        Command::Oracle { case } => cmd_oracle(case),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Io(e) => eprintln!("error: {e:#}"),
                Failure::Input(msg) => eprintln!("error: malformed input: {msg}"),
                Failure::Usage(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
