//! BPSK over AWGN, channel LLRs and 4-bit LLR quantization.
//!
//! Bit 0 maps to symbol +1, so a positive LLR favours bit 0. Only the
//! all-zero codeword is ever transmitted; see the decoder's sign-flip
//! equivariance tests for why that is sufficient.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::message::{QuantizedMessage, Sign};

/// Bits of precision for quantized channel LLRs.
pub const LLR_BITS: u32 = 4;
/// Largest quantized channel LLR magnitude, `2^(LLR_BITS-1) - 1`.
pub const LLR_MAX_MAGNITUDE: u8 = (1 << (LLR_BITS - 1)) - 1;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("code rate must lie in (0, 1), got {0}")]
    Rate(f64),
    #[error("noise variance must be positive and finite, got {0}")]
    NoiseVariance(f64),
    #[error("SNR must not be NaN or -inf, got {0}")]
    Snr(f64),
    #[error("quantizer scaling must be positive and finite, got {0}")]
    Alpha(f64),
}

/// How the SNR axis maps to noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrKind {
    /// Eb/N0: `sigma^2 = 1 / (2 R 10^(snr/10))`.
    #[default]
    Ebn0,
    /// Es/N0: `sigma^2 = 1 / (2 10^(snr/10))`.
    Esn0,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub snr_db: f64,
    pub rate: f64,
    pub kind: SnrKind,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(snr_db: f64, rate: f64, kind: SnrKind, seed: u64) -> Result<Self, ChannelError> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(ChannelError::Rate(rate));
        }
        if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
            return Err(ChannelError::Snr(snr_db));
        }
        Ok(ChannelConfig {
            snr_db,
            rate,
            kind,
            seed,
        })
    }

    /// Per-dimension noise variance. `snr_db = +inf` gives exactly 0.
    pub fn noise_variance(&self) -> f64 {
        let linear = 10f64.powf(self.snr_db / 10.0);
        match self.kind {
            SnrKind::Ebn0 => 1.0 / (2.0 * self.rate * linear),
            SnrKind::Esn0 => 1.0 / (2.0 * linear),
        }
    }

    /// Channel LLRs for one all-zero frame drawn from `rng`.
    ///
    /// A noiseless channel yields `+inf` for every bit.
    pub fn all_zero_llrs<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let sigma2 = self.noise_variance();
        if sigma2 == 0.0 {
            return vec![f64::INFINITY; n];
        }
        let y = transmit_all_zero_with(rng, sigma2, n);
        compute_llrs(&y, sigma2).expect("variance checked positive")
    }
}

/// RNG for one frame, keyed by (master seed, SNR point, frame index).
///
/// The key is placed directly in the ChaCha seed, so streams for distinct
/// keys are independent and the mapping does not depend on scheduling.
pub fn frame_rng(master_seed: u64, point: u64, frame: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&point.to_le_bytes());
    seed[16..24].copy_from_slice(&frame.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

/// BPSK symbols of the all-zero codeword after AWGN, seeded by `config.seed`.
pub fn transmit_all_zero(config: &ChannelConfig, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    transmit_all_zero_with(&mut rng, config.noise_variance(), n)
}

pub fn transmit_all_zero_with<R: Rng>(rng: &mut R, sigma2: f64, n: usize) -> Vec<f64> {
    if sigma2 == 0.0 {
        return vec![1.0; n];
    }
    let sigma = sigma2.sqrt();
    (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            1.0 + sigma * z
        })
        .collect()
}

/// `L = 2 y / sigma^2` elementwise.
pub fn compute_llrs(y: &[f64], sigma2: f64) -> Result<Vec<f64>, ChannelError> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(ChannelError::NoiseVariance(sigma2));
    }
    let scale = 2.0 / sigma2;
    Ok(y.iter().map(|&v| scale * v).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rounding {
    /// `floor(x + 0.5)`.
    #[default]
    HalfUp,
    Floor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizerConfig {
    pub alpha: f64,
    pub rounding: Rounding,
}

impl QuantizerConfig {
    pub fn new(alpha: f64) -> Result<Self, ChannelError> {
        Self::with_rounding(alpha, Rounding::HalfUp)
    }

    pub fn with_rounding(alpha: f64, rounding: Rounding) -> Result<Self, ChannelError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(ChannelError::Alpha(alpha));
        }
        Ok(QuantizerConfig { alpha, rounding })
    }

    /// Default scaling for `q` message bits: 0.75, 0.95 and 1.15 for q = 2, 3, 4.
    pub fn default_alpha(q: u8) -> Option<f64> {
        match q {
            2 => Some(0.75),
            3 => Some(0.95),
            4 => Some(1.15),
            _ => None,
        }
    }

    /// Quantizes a single LLR to a 4-bit sign-magnitude value.
    pub fn quantize(&self, llr: f64) -> QuantizedMessage {
        let scaled = (self.alpha * llr).abs();
        let level = match self.rounding {
            Rounding::HalfUp => (scaled + 0.5).floor(),
            Rounding::Floor => scaled.floor(),
        };
        let magnitude = level.min(f64::from(LLR_MAX_MAGNITUDE)) as u8;
        QuantizedMessage::new(Sign::of(llr), magnitude)
    }
}

/// Real channel LLRs `L_n` alongside their quantized form `I_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelObservation {
    pub llrs: Vec<f64>,
    pub quantized: Vec<QuantizedMessage>,
}

impl ChannelObservation {
    pub fn len(&self) -> usize {
        self.quantized.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quantized.is_empty()
    }
}

pub fn quantize_llrs(llrs: &[f64], qc: &QuantizerConfig) -> ChannelObservation {
    ChannelObservation {
        llrs: llrs.to_vec(),
        quantized: llrs.iter().map(|&l| qc.quantize(l)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(sign: Sign, magnitude: u8) -> QuantizedMessage {
        QuantizedMessage::new(sign, magnitude)
    }

    #[test]
    fn noise_variance_mapping() {
        let c = ChannelConfig::new(0.0, 0.5, SnrKind::Ebn0, 0).unwrap();
        assert_eq!(c.noise_variance(), 1.0);
        let c = ChannelConfig::new(0.0, 0.5, SnrKind::Esn0, 0).unwrap();
        assert_eq!(c.noise_variance(), 0.5);
        let c = ChannelConfig::new(f64::INFINITY, 0.826, SnrKind::Ebn0, 0).unwrap();
        assert_eq!(c.noise_variance(), 0.0);
        assert!(ChannelConfig::new(3.0, 1.0, SnrKind::Ebn0, 0).is_err());
        assert!(ChannelConfig::new(f64::NAN, 0.5, SnrKind::Ebn0, 0).is_err());
    }

    #[test]
    fn noiseless_transmission_is_exact() {
        let c = ChannelConfig::new(f64::INFINITY, 0.826, SnrKind::Ebn0, 9).unwrap();
        assert!(transmit_all_zero(&c, 100).iter().all(|&y| y == 1.0));
    }

    #[test]
    fn transmission_is_deterministic() {
        let c = ChannelConfig::new(3.0, 0.826, SnrKind::Ebn0, 42).unwrap();
        assert_eq!(transmit_all_zero(&c, 64), transmit_all_zero(&c, 64));
        let d = ChannelConfig { seed: 43, ..c };
        assert_ne!(transmit_all_zero(&c, 64), transmit_all_zero(&d, 64));
    }

    #[test]
    fn sample_mean_within_standard_error() {
        let c = ChannelConfig::new(3.0, 0.826, SnrKind::Ebn0, 7).unwrap();
        let n = 1_000_000;
        let y = transmit_all_zero(&c, n);
        let mean = y.iter().sum::<f64>() / n as f64;
        let sigma = c.noise_variance().sqrt();
        assert!((mean - 1.0).abs() < 4.0 * sigma / (n as f64).sqrt(), "mean {mean}");
        let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var / c.noise_variance() - 1.0).abs() < 0.01);
    }

    #[test]
    fn llr_formula() {
        assert_eq!(compute_llrs(&[1.0, 0.0], 1.0).unwrap(), vec![2.0, 0.0]);
        assert_eq!(compute_llrs(&[-0.5], 0.8).unwrap(), vec![-1.25]);
        assert_eq!(compute_llrs(&[1.0], 0.0), Err(ChannelError::NoiseVariance(0.0)));
        assert!(compute_llrs(&[1.0], -1.0).is_err());
    }

    #[test]
    fn quantizer_examples() {
        let q75 = QuantizerConfig::new(0.75).unwrap();
        assert_eq!(q75.quantize(12.0), q(Sign::Plus, 7));
        let q95 = QuantizerConfig::new(0.95).unwrap();
        assert_eq!(q95.quantize(-3.2), q(Sign::Minus, 3));
        assert_eq!(q95.quantize(0.0), q(Sign::Plus, 0));
        assert_eq!(q95.quantize(f64::INFINITY), q(Sign::Plus, 7));
        // 0.95 * 0.5 = 0.475 rounds to a signed zero.
        assert_eq!(q95.quantize(-0.5), q(Sign::Minus, 0));
        let floor = QuantizerConfig::with_rounding(1.0, Rounding::Floor).unwrap();
        assert_eq!(floor.quantize(2.9), q(Sign::Plus, 2));
        assert!(QuantizerConfig::new(0.0).is_err());
    }

    #[test]
    fn quantizer_symmetry_and_monotonicity_on_dense_grid() {
        for alpha in [0.75, 0.95, 1.15] {
            for rounding in [Rounding::HalfUp, Rounding::Floor] {
                let qc = QuantizerConfig::with_rounding(alpha, rounding).unwrap();
                let mut prev = 0u8;
                for k in 1..=20_000 {
                    let l = k as f64 * 1e-3;
                    let pos = qc.quantize(l);
                    let neg = qc.quantize(-l);
                    assert_eq!(neg, -pos, "alpha {alpha} L {l}");
                    assert!(pos.magnitude >= prev);
                    assert!(pos.magnitude <= LLR_MAX_MAGNITUDE);
                    prev = pos.magnitude;
                }
            }
        }
    }

    #[test]
    fn observation_keeps_signs() {
        let obs = quantize_llrs(&[0.1, -0.1, 5.0], &QuantizerConfig::new(1.15).unwrap());
        assert_eq!(obs.len(), 3);
        for (l, i) in obs.llrs.iter().zip(&obs.quantized) {
            assert_eq!(Sign::of(*l), i.sign);
        }
    }

    #[test]
    fn frame_streams_are_keyed() {
        let mut a = frame_rng(1, 0, 5);
        let mut b = frame_rng(1, 0, 5);
        let mut c = frame_rng(1, 1, 5);
        let (x, y, z): (u64, u64, u64) = (a.random(), b.random(), c.random());
        assert_eq!(x, y);
        assert_ne!(x, z);
    }
}
