//! Random search over monotone weight schedules.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_rational::Ratio;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelConfig, QuantizerConfig};
use crate::code_graph::TannerGraph;
use crate::decoder::{build_frame_decoder, DecoderConfig, DecoderFamily};
use crate::montecarlo::{run_point_with, StoppingRule};

use super::{p2_encode, WeightError, WeightSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Ber,
    #[default]
    Fer,
}

/// Search settings. The SNR point, rate and noise seed come from the
/// channel passed to [`optimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub n_candidates: usize,
    pub frames_per_candidate: u64,
    pub objective: Objective,
    pub weight_value_set: Vec<Ratio<i64>>,
    /// Seed for drawing candidates.
    pub seed: u64,
    /// Every candidate sees the same noise realizations.
    pub common_random_numbers: bool,
    pub target_degrees: BTreeSet<usize>,
}

impl OptimizerConfig {
    pub fn new(n_candidates: usize, frames_per_candidate: u64, seed: u64) -> Self {
        OptimizerConfig {
            n_candidates,
            frames_per_candidate,
            objective: Objective::Fer,
            weight_value_set: default_value_set(),
            seed,
            common_random_numbers: true,
            target_degrees: BTreeSet::from([3]),
        }
    }

    pub fn validate(&self) -> Result<(), WeightError> {
        let fail = |m: &str| Err(WeightError::Optimizer(m.to_string()));
        if self.n_candidates == 0 {
            return fail("n_candidates must be at least 1");
        }
        if self.frames_per_candidate == 0 {
            return fail("frames_per_candidate must be at least 1");
        }
        if self.weight_value_set.is_empty() {
            return fail("weight value set is empty");
        }
        if self.target_degrees.is_empty() {
            return fail("no target degrees");
        }
        for &v in &self.weight_value_set {
            p2_encode(v)?;
        }
        Ok(())
    }
}

/// {1, 1.25, 1.5, 1.75, 2, 2.5, 3, 3.5}
pub fn default_value_set() -> Vec<Ratio<i64>> {
    [4, 5, 6, 7, 8, 10, 12, 14].iter().map(|&n| Ratio::new(n, 4)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateScore {
    pub index: usize,
    #[serde(serialize_with = "serialize_values")]
    pub weights: Vec<Ratio<i64>>,
    pub score: f64,
    pub ber: f64,
    pub fer: f64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub mean_iterations: f64,
}

fn serialize_values<S: serde::Serializer>(values: &[Ratio<i64>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|&v| super::p2::format_ratio(v)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub best: WeightSchedule,
    pub best_index: usize,
    pub score: f64,
    pub all_scores: Vec<CandidateScore>,
}

/// Candidate 0 is all ones; the rest are i.i.d. draws sorted ascending,
/// redrawn when they repeat an earlier candidate. Fewer than `n` are
/// returned only when the value set admits fewer distinct schedules.
pub fn draw_candidates(oc: &OptimizerConfig, max_iters: usize) -> Vec<Vec<Ratio<i64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(oc.seed);
    let ones = vec![Ratio::from_integer(1); max_iters];
    let mut seen = HashSet::from([ones.clone()]);
    let mut out = vec![ones];
    let mut attempts = 0usize;
    let max_attempts = 1000 * oc.n_candidates + 1000;
    while out.len() < oc.n_candidates && attempts < max_attempts {
        attempts += 1;
        let mut draw: Vec<Ratio<i64>> = (0..max_iters)
            .map(|_| *oc.weight_value_set.choose(&mut rng).expect("value set checked nonempty"))
            .collect();
        draw.sort();
        if seen.insert(draw.clone()) {
            out.push(draw);
        }
    }
    if out.len() < oc.n_candidates {
        log::warn!("only {} distinct candidates exist for this value set", out.len());
    }
    out
}

/// Picks the candidate schedule with the lowest Monte-Carlo BER or FER at
/// the channel's SNR. Ties go to fewer mean iterations, then to the
/// lexicographically smaller schedule.
pub fn optimize(
    graph: &TannerGraph,
    base: &DecoderConfig,
    channel: &ChannelConfig,
    quantizer: &QuantizerConfig,
    oc: &OptimizerConfig,
) -> Result<OptimizeResult, WeightError> {
    oc.validate()?;
    if base.family != DecoderFamily::SpMs {
        return Err(WeightError::Optimizer("weights apply to the SP-MS decoder only".into()));
    }
    let rule = StoppingRule::fixed(oc.frames_per_candidate).map_err(|e| WeightError::Optimizer(e.to_string()))?;
    let mut all_scores = Vec::new();
    for (index, values) in draw_candidates(oc, base.max_iters).into_iter().enumerate() {
        let schedule = WeightSchedule::new(base.q, oc.target_degrees.clone(), values.clone());
        let config = base.clone().with_weights(schedule);
        build_frame_decoder(graph, &config, quantizer).map_err(|e| WeightError::Optimizer(e.to_string()))?;
        let point_index = if oc.common_random_numbers { 0 } else { index as u64 };
        let p = run_point_with(
            graph.n_vars(),
            || build_frame_decoder(graph, &config, quantizer).expect("config validated"),
            channel,
            &rule,
            point_index,
        )
        .map_err(|e| WeightError::Optimizer(e.to_string()))?;
        let score = match oc.objective {
            Objective::Ber => p.ber,
            Objective::Fer => p.fer,
        };
        log::info!("candidate {index}: score {score:e}");
        all_scores.push(CandidateScore {
            index,
            weights: values,
            score,
            ber: p.ber,
            fer: p.fer,
            frame_errors: p.frame_errors,
            bit_errors: p.bit_errors,
            mean_iterations: p.mean_iterations,
        });
    }
    let best = all_scores
        .iter()
        .min_by(|a, b| rank(a, b))
        .expect("at least one candidate");
    Ok(OptimizeResult {
        best: WeightSchedule::new(base.q, oc.target_degrees.clone(), best.weights.clone()),
        best_index: best.index,
        score: best.score,
        all_scores: all_scores.clone(),
    })
}

fn rank(a: &CandidateScore, b: &CandidateScore) -> Ordering {
    a.score
        .total_cmp(&b.score)
        .then(a.mean_iterations.total_cmp(&b.mean_iterations))
        .then_with(|| a.weights.cmp(&b.weights))
}
