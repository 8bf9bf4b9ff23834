mod commands;
mod parse;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// LDPC code construction, SP-MS/BP simulation and weight optimization.
#[derive(Debug, Parser)]
#[command(name = "spms", version)]
struct Cli {
    /// Repeat for more log output (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a PEG code and write it as an alist file.
    Construct(ConstructArgs),
    /// Run an SNR sweep and write JSONL, CSV and manifest files.
    Simulate(SimulateArgs),
    /// Random-search a weight schedule at one SNR point.
    Optimize(OptimizeArgs),
    /// Check a weight schedule file; exits 1 on any violation.
    ValidateWeights(ValidateArgs),
    /// Print the degree distribution and size of a code.
    Info(InfoArgs),
}

#[derive(Debug, Args, Serialize)]
struct ConstructArgs {
    #[arg(long)]
    n: usize,
    /// Variable-node counts per degree, e.g. 3:742,6:252,11:15,12:15.
    #[arg(long)]
    degree_spec: String,
    #[arg(long)]
    checks: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: std::path::PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DecoderArg {
    Bp,
    SpMs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SnrKindArg {
    Ebn0,
    Esn0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ObjectiveArg {
    Ber,
    Fer,
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    code: std::path::PathBuf,
    #[arg(long, value_enum)]
    decoder: DecoderArg,
    /// Message precision for sp-ms (2, 3 or 4).
    #[arg(long)]
    q: Option<u8>,
    /// Channel LLR scaling before 4-bit quantization (default by q).
    #[arg(long)]
    alpha: Option<f64>,
    /// Schedule file, `table1`, or `none`.
    #[arg(long, default_value = "none")]
    weights: String,
    /// `start:step:stop` (inclusive) or a comma-separated list, in dB.
    #[arg(long)]
    snr: String,
    #[arg(long, value_enum, default_value = "ebn0")]
    snr_kind: SnrKindArg,
    /// Code rate for the Eb/N0 conversion (default 1 - M/N).
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long, default_value_t = 12)]
    max_iters: usize,
    #[arg(long, default_value_t = 500)]
    min_frames: u64,
    #[arg(long, default_value_t = 30)]
    min_frame_errors: u64,
    #[arg(long, default_value_t = 100_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out_prefix: std::path::PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct OptimizeArgs {
    #[arg(long)]
    code: std::path::PathBuf,
    #[arg(long)]
    q: u8,
    #[arg(long)]
    alpha: Option<f64>,
    /// Single SNR point in dB.
    #[arg(long)]
    snr: f64,
    #[arg(long, value_enum, default_value = "ebn0")]
    snr_kind: SnrKindArg,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long, default_value_t = 100)]
    candidates: usize,
    #[arg(long, default_value_t = 1000)]
    frames_per_candidate: u64,
    #[arg(long, value_enum, default_value = "fer")]
    objective: ObjectiveArg,
    #[arg(long, default_value_t = 12)]
    max_iters: usize,
    /// Comma-separated VN degrees that receive the weights.
    #[arg(long, default_value = "3")]
    target_degrees: String,
    /// Comma-separated candidate weight values (default 1,1.25,1.5,1.75,2,2.5,3,3.5).
    #[arg(long)]
    values: Option<String>,
    /// Draw fresh noise for every candidate instead of sharing it.
    #[arg(long)]
    independent_noise: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Output schedule JSON; scores go to the same stem with `.scores.csv`.
    #[arg(long)]
    out: std::path::PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct ValidateArgs {
    /// Schedule JSON file, or `table1` together with --q.
    schedule: String,
    #[arg(long)]
    q: Option<u8>,
    /// Also require exactly this many iterations.
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
struct InfoArgs {
    #[arg(long)]
    code: std::path::PathBuf,
    /// Also compute the girth (BFS from every variable node).
    #[arg(long)]
    girth: bool,
    /// Also compute the GF(2) rank of H.
    #[arg(long)]
    verify_rank: bool,
}

/// Bad flag combinations found after parsing; exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match &cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Optimize(a) => commands::optimize(a),
        Command::ValidateWeights(a) => commands::validate_weights(a),
        Command::Info(a) => commands::info(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
