//! All-zero-codeword Monte-Carlo simulation over AWGN.
//!
//! Every frame draws its noise from an RNG keyed by (master seed, point
//! index, frame index). Frames run in parallel batches, but the stopping
//! rule is applied by scanning results in frame order, so every statistic
//! is independent of the worker count.

mod output;
mod stats;

pub use output::{csv_row, read_jsonl, FileSink, JsonlCsvSink, Record, SweepSink, CSV_HEADER};
pub use stats::{binomial_ci, disjoint};

use std::io;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::channel::{frame_rng, ChannelConfig, ChannelError, QuantizerConfig, SnrKind};
use crate::code_graph::{write_alist, TannerGraph};
use crate::decoder::{build_frame_decoder, DecodeError, DecoderConfig, FrameDecoder};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum MonteCarloError {
    #[error("invalid stopping rule: {0}")]
    Rule(String),
    #[error("invalid counts: {errors} errors in {trials} trials")]
    Counts { errors: u64, trials: u64 },
    #[error("confidence {0} is not in (0, 1)")]
    Confidence(f64),
    #[error(transparent)]
    Decoder(#[from] DecodeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("writing results after {} completed points: {source}", completed.len())]
    Io {
        completed: Vec<PointResult>,
        source: io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub min_frames: u64,
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        StoppingRule {
            min_frames: 500,
            min_frame_errors: 30,
            max_frames: 100_000_000,
        }
    }
}

impl StoppingRule {
    pub fn new(min_frames: u64, min_frame_errors: u64, max_frames: u64) -> Result<Self, MonteCarloError> {
        let rule = StoppingRule {
            min_frames,
            min_frame_errors,
            max_frames,
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Exactly `frames` frames regardless of errors.
    pub fn fixed(frames: u64) -> Result<Self, MonteCarloError> {
        Self::new(frames, 1, frames)
    }

    pub fn validate(&self) -> Result<(), MonteCarloError> {
        if self.min_frames == 0 {
            return Err(MonteCarloError::Rule("min_frames must be at least 1".into()));
        }
        if self.min_frame_errors == 0 {
            return Err(MonteCarloError::Rule("min_frame_errors must be at least 1".into()));
        }
        if self.max_frames < self.min_frames {
            return Err(MonteCarloError::Rule(format!(
                "max_frames {} is below min_frames {}",
                self.max_frames, self.min_frames
            )));
        }
        Ok(())
    }
}

/// Statistics for one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub point_index: u64,
    pub snr_db: f64,
    pub frames_sent: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    /// Frames that converged to a nonzero codeword.
    pub undetected_errors: u64,
    /// Frames whose decoder stopped without satisfying every check.
    pub unconverged: u64,
    pub ber: f64,
    pub fer: f64,
    pub mean_iterations: f64,
    pub mean_iterations_on_success: Option<f64>,
    /// Stopped by `max_frames` before reaching `min_frame_errors`.
    pub censored: bool,
    pub master_seed: u64,
    pub wall_time_seconds: f64,
}

impl PointResult {
    pub fn successes(&self) -> u64 {
        self.frames_sent - self.frame_errors
    }

    pub fn fer_ci(&self, confidence: f64) -> Result<(f64, f64), MonteCarloError> {
        binomial_ci(self.frame_errors, self.frames_sent, confidence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameStats {
    pub bit_errors: u64,
    pub converged: bool,
    pub iterations: u64,
}

impl FrameStats {
    pub fn frame_error(&self) -> bool {
        self.bit_errors > 0
    }
}

/// Decodes frame `frame` of point `point` under `channel`.
pub fn simulate_frame<D: FrameDecoder + ?Sized>(
    decoder: &mut D,
    channel: &ChannelConfig,
    n_vars: usize,
    point: u64,
    frame: u64,
) -> FrameStats {
    let mut rng = frame_rng(channel.seed, point, frame);
    let llrs = channel.all_zero_llrs(&mut rng, n_vars);
    let out = decoder.decode_frame(&llrs);
    FrameStats {
        bit_errors: out.bit_errors_vs_zero() as u64,
        converged: out.converged,
        iterations: out.iterations_used as u64,
    }
}

#[derive(Debug, Default)]
struct Tally {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    undetected: u64,
    unconverged: u64,
    iterations: u64,
    success_iterations: u64,
}

impl Tally {
    fn add(&mut self, f: FrameStats) {
        self.frames += 1;
        self.bit_errors += f.bit_errors;
        self.iterations += f.iterations;
        if !f.converged {
            self.unconverged += 1;
        }
        if f.frame_error() {
            self.frame_errors += 1;
            if f.converged {
                self.undetected += 1;
            }
        } else {
            self.success_iterations += f.iterations;
        }
    }
}

/// Runs one SNR point with decoders built by `factory`, one per worker.
///
/// The master seed is `channel.seed`. A noiseless channel produces the same
/// frame every time, so it stops after `min_frames` and is flagged censored
/// if no error occurred.
pub fn run_point_with<F, D>(
    n_vars: usize,
    factory: F,
    channel: &ChannelConfig,
    rule: &StoppingRule,
    point_index: u64,
) -> Result<PointResult, MonteCarloError>
where
    F: Fn() -> D + Sync,
    D: FrameDecoder,
{
    rule.validate()?;
    let start = Instant::now();
    let max_frames = if channel.noise_variance() == 0.0 {
        rule.min_frames
    } else {
        rule.max_frames
    };
    let mut tally = Tally::default();
    let mut next = 0u64;
    'outer: while next < max_frames {
        let batch = (next / 2).clamp(256, 1 << 16).min(max_frames - next);
        let results: Vec<FrameStats> = (next..next + batch)
            .into_par_iter()
            .map_init(&factory, |dec, frame| {
                simulate_frame(dec, channel, n_vars, point_index, frame)
            })
            .collect();
        for r in results {
            tally.add(r);
            if tally.frames >= rule.min_frames && tally.frame_errors >= rule.min_frame_errors {
                break 'outer;
            }
        }
        next += batch;
    }
    let frames = tally.frames;
    let result = PointResult {
        point_index,
        snr_db: channel.snr_db,
        frames_sent: frames,
        bit_errors: tally.bit_errors,
        frame_errors: tally.frame_errors,
        undetected_errors: tally.undetected,
        unconverged: tally.unconverged,
        ber: tally.bit_errors as f64 / (frames as f64 * n_vars as f64),
        fer: tally.frame_errors as f64 / frames as f64,
        mean_iterations: tally.iterations as f64 / frames as f64,
        mean_iterations_on_success: (frames > tally.frame_errors)
            .then(|| tally.success_iterations as f64 / (frames - tally.frame_errors) as f64),
        censored: tally.frame_errors < rule.min_frame_errors,
        master_seed: channel.seed,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    log::debug!(
        "point {} snr={} frames={} frame_errors={} ber={:e}",
        point_index,
        result.snr_db,
        result.frames_sent,
        result.frame_errors,
        result.ber
    );
    Ok(result)
}

/// Runs one SNR point of `decoder` on `graph` (point index 0).
pub fn run_point(
    graph: &TannerGraph,
    decoder: &DecoderConfig,
    channel: &ChannelConfig,
    quantizer: &QuantizerConfig,
    rule: &StoppingRule,
) -> Result<PointResult, MonteCarloError> {
    build_frame_decoder(graph, decoder, quantizer)?;
    run_point_with(
        graph.n_vars(),
        || build_frame_decoder(graph, decoder, quantizer).expect("config validated"),
        channel,
        rule,
        0,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub decoder: DecoderConfig,
    pub quantizer: QuantizerConfig,
    pub rate: f64,
    pub snr_kind: SnrKind,
    pub snr_points: Vec<f64>,
    pub rule: StoppingRule,
    pub master_seed: u64,
    /// Worker count; `None` uses the global pool. Never affects results.
    pub threads: Option<usize>,
}

impl SweepConfig {
    /// Every result-relevant setting as JSON (worker count excluded).
    pub fn describe(&self, graph: &TannerGraph) -> serde_json::Value {
        let d = &self.decoder;
        serde_json::json!({
            "decoder": d.family,
            "q": d.q,
            "max_iters": d.max_iters,
            "offsets": d.offsets.pairs(),
            "weights": d.weights.as_ref().map(|w| serde_json::from_str::<serde_json::Value>(&w.to_json())
                .expect("schedule JSON parses")),
            "tie_break": d.tie_break,
            "quantizer": self.quantizer,
            "rate": self.rate,
            "snr_kind": self.snr_kind,
            "snr_points": self.snr_points,
            "rule": self.rule,
            "master_seed": self.master_seed,
            "code_sha256": sha256_hex(write_alist(graph).as_bytes()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepHeader {
    pub version: String,
    pub config_hash: String,
    pub config: serde_json::Value,
}

impl SweepHeader {
    pub fn new(config: serde_json::Value) -> Self {
        let canonical = serde_json::to_string(&config).expect("JSON value serializes");
        SweepHeader {
            version: VERSION.to_string(),
            config_hash: sha256_hex(canonical.as_bytes()),
            config,
        }
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, MonteCarloError> {
    match threads {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| MonteCarloError::ThreadPool(e.to_string()))?
            .install(f)),
        None => Ok(f()),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs every SNR point in order, passing each result to `sink` as soon as
/// it is complete. Point `i` uses point index `i` for seeding.
pub fn run_sweep(
    graph: &TannerGraph,
    config: &SweepConfig,
    sink: &mut dyn SweepSink,
) -> Result<Vec<PointResult>, MonteCarloError> {
    config.rule.validate()?;
    build_frame_decoder(graph, &config.decoder, &config.quantizer)?;
    let pool = match config.threads {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| MonteCarloError::ThreadPool(e.to_string()))?,
        ),
        None => None,
    };
    let header = SweepHeader::new(config.describe(graph));
    let mut completed = Vec::with_capacity(config.snr_points.len());
    if let Err(source) = sink.header(&header) {
        return Err(MonteCarloError::Io { completed, source });
    }
    for (i, &snr) in config.snr_points.iter().enumerate() {
        let channel = ChannelConfig::new(snr, config.rate, config.snr_kind, config.master_seed)?;
        let run = || {
            run_point_with(
                graph.n_vars(),
                || build_frame_decoder(graph, &config.decoder, &config.quantizer).expect("config validated"),
                &channel,
                &config.rule,
                i as u64,
            )
        };
        let point = match &pool {
            Some(p) => p.install(run)?,
            None => run()?,
        };
        if let Err(source) = sink.point(&point) {
            completed.push(point);
            return Err(MonteCarloError::Io { completed, source });
        }
        completed.push(point);
    }
    Ok(completed)
}
