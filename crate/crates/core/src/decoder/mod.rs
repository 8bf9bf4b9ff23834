//! LDPC decoders: the floating-point sum-product reference and the quantized
//! sign-preserving min-sum (SP-MS) decoder with optional per-iteration
//! weights on the check messages of selected VN degrees.
//!
//! Both decoders use a flooding schedule (all checks, then all variables),
//! check the syndrome of the channel hard decisions before the first
//! iteration, and stop as soon as the tentative decisions satisfy every
//! check.

mod bp;
mod rules;
mod spms;

pub use bp::{BpDecoder, BP_MESSAGE_CLAMP};
pub use rules::{cn_update_minsum, psi, tentative_decision, vn_update_spms, vn_update_unweighted};
pub use spms::{EdgeState, IterationView, SpmsDecoder};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{quantize_llrs, QuantizerConfig};
use crate::code_graph::TannerGraph;
use crate::weights::{WeightError, WeightSchedule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("message precision q = {0} is not one of 2, 3, 4")]
    UnsupportedQ(u8),
    #[error("max_iters must be at least 1")]
    ZeroIterations,
    #[error("input has length {got}, graph has {expected} variable nodes")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite message value {0}")]
    NonFinite(f64),
    #[error("update rule needs at least one incoming message")]
    EmptyIncoming,
    #[error("weight must be positive")]
    NonPositiveWeight,
    #[error("decoder family {0:?} cannot run this operation")]
    WrongFamily(DecoderFamily),
    #[error("weight schedule covers {schedule} iterations but the decoder runs {decoder}")]
    ScheduleLength { schedule: usize, decoder: usize },
    #[error(transparent)]
    Schedule(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderFamily {
    BpFloat,
    SpMs,
}

/// Offset `phi` subtracted from the floored magnitude inside the saturation
/// function, looked up by that floored magnitude. Unlisted magnitudes use 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetTable(Vec<u32>);

impl OffsetTable {
    pub fn zero() -> Self {
        OffsetTable(Vec::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut table = Vec::new();
        for (magnitude, offset) in pairs {
            let i = magnitude as usize;
            if table.len() <= i {
                table.resize(i + 1, 0);
            }
            table[i] = offset;
        }
        OffsetTable(table)
    }

    #[inline]
    pub fn offset(&self, floored_magnitude: u32) -> u32 {
        self.0.get(floored_magnitude as usize).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&o| o == 0)
    }

    /// Nonzero `(magnitude, offset)` entries.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &o)| o != 0)
            .map(|(m, &o)| (m as u32, o))
            .collect()
    }
}

/// Where the sign-preserving factor comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuPolicy {
    /// Sign of the message the edge carried in the previous iteration
    /// (the channel sign before the first iteration). For the tentative
    /// decision: sign of the previous a-posteriori sum.
    #[default]
    PreviousMessage,
    /// Always the sign of the quantized channel value.
    ChannelSign,
}

/// Sign used when a VN sum or a tentative sum is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroSumPolicy {
    /// Channel sign when its magnitude is nonzero, otherwise `mu`.
    #[default]
    ChannelThenMu,
    /// Always `mu`.
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TieBreak {
    pub mu: MuPolicy,
    pub zero_sum: ZeroSumPolicy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoderConfig {
    pub family: DecoderFamily,
    /// Message precision in bits (SP-MS only).
    pub q: u8,
    pub max_iters: usize,
    pub offsets: OffsetTable,
    /// `None` decodes with the unweighted update rule on every VN.
    pub weights: Option<WeightSchedule>,
    pub tie_break: TieBreak,
}

pub const DEFAULT_MAX_ITERS: usize = 12;

impl DecoderConfig {
    pub fn sp_ms(q: u8) -> Self {
        DecoderConfig {
            family: DecoderFamily::SpMs,
            q,
            max_iters: DEFAULT_MAX_ITERS,
            offsets: OffsetTable::zero(),
            weights: None,
            tie_break: TieBreak::default(),
        }
    }

    pub fn bp() -> Self {
        DecoderConfig {
            family: DecoderFamily::BpFloat,
            q: 0,
            ..Self::sp_ms(0)
        }
    }

    pub fn with_weights(mut self, schedule: WeightSchedule) -> Self {
        self.weights = Some(schedule);
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn validate(&self) -> Result<(), DecodeError> {
        if self.max_iters == 0 {
            return Err(DecodeError::ZeroIterations);
        }
        if self.family == DecoderFamily::SpMs {
            if !(2..=4).contains(&self.q) {
                return Err(DecodeError::UnsupportedQ(self.q));
            }
            if let Some(schedule) = &self.weights {
                if schedule.max_iters() < self.max_iters {
                    return Err(DecodeError::ScheduleLength {
                        schedule: schedule.max_iters(),
                        decoder: self.max_iters,
                    });
                }
                schedule.compile()?;
            }
        }
        Ok(())
    }

    /// Largest message magnitude `2^(q-1) - 1`.
    pub fn max_magnitude(&self) -> u8 {
        max_magnitude(self.q)
    }
}

pub(crate) fn max_magnitude(q: u8) -> u8 {
    (1u8 << (q - 1)) - 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Hard decisions, one per VN (0 or 1).
    pub bits: Vec<u8>,
    /// True iff `bits` satisfies every check.
    pub converged: bool,
    pub iterations_used: usize,
    /// Unsatisfied-check count before the first iteration, then after each one.
    pub syndrome_trace: Vec<usize>,
}

impl DecodeOutcome {
    pub fn bit_errors_vs_zero(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }
}

/// `H * bits` over GF(2): number of unsatisfied checks and whether it is zero.
pub fn syndrome(graph: &TannerGraph, bits: &[u8]) -> Result<(usize, bool), DecodeError> {
    if bits.len() != graph.n_vars() {
        return Err(DecodeError::DimensionMismatch {
            expected: graph.n_vars(),
            got: bits.len(),
        });
    }
    let weight = syndrome_weight(graph, bits);
    Ok((weight, weight == 0))
}

#[inline]
pub(crate) fn syndrome_weight(graph: &TannerGraph, bits: &[u8]) -> usize {
    (0..graph.n_checks())
        .filter(|&c| graph.cn_neighbors(c).fold(0u8, |acc, v| acc ^ bits[v]) != 0)
        .count()
}

/// One decoder instance fed with real channel LLRs frame after frame.
///
/// Instances own their scratch state; they share the graph read-only.
pub trait FrameDecoder: Send {
    fn decode_frame(&mut self, llrs: &[f64]) -> DecodeOutcome;
}

impl<T: FrameDecoder + ?Sized> FrameDecoder for Box<T> {
    fn decode_frame(&mut self, llrs: &[f64]) -> DecodeOutcome {
        (**self).decode_frame(llrs)
    }
}

impl FrameDecoder for BpDecoder<'_> {
    fn decode_frame(&mut self, llrs: &[f64]) -> DecodeOutcome {
        self.decode(llrs).expect("frame length matches graph")
    }
}

/// SP-MS decoder bundled with the channel quantizer that feeds it.
pub struct QuantizedFrameDecoder<'g> {
    pub decoder: SpmsDecoder<'g>,
    pub quantizer: QuantizerConfig,
}

impl FrameDecoder for QuantizedFrameDecoder<'_> {
    fn decode_frame(&mut self, llrs: &[f64]) -> DecodeOutcome {
        let obs = quantize_llrs(llrs, &self.quantizer);
        self.decoder
            .decode(&obs.quantized)
            .expect("frame length matches graph")
    }
}

/// Builds a frame decoder for `config`. The quantizer is used by SP-MS only.
pub fn build_frame_decoder<'g>(
    graph: &'g TannerGraph,
    config: &DecoderConfig,
    quantizer: &QuantizerConfig,
) -> Result<Box<dyn FrameDecoder + 'g>, DecodeError> {
    Ok(match config.family {
        DecoderFamily::BpFloat => Box::new(BpDecoder::new(graph, config)?),
        DecoderFamily::SpMs => Box::new(QuantizedFrameDecoder {
            decoder: SpmsDecoder::new(graph, config)?,
            quantizer: *quantizer,
        }),
    })
}

/// Quantized SP-MS decoding of one observation.
pub fn decode_spms(
    graph: &TannerGraph,
    channel: &[crate::message::QuantizedMessage],
    config: &DecoderConfig,
) -> Result<DecodeOutcome, DecodeError> {
    SpmsDecoder::new(graph, config)?.decode(channel)
}

/// Floating-point sum-product decoding of one frame.
pub fn decode_bp(graph: &TannerGraph, llrs: &[f64], config: &DecoderConfig) -> Result<DecodeOutcome, DecodeError> {
    BpDecoder::new(graph, config)?.decode(llrs)
}
