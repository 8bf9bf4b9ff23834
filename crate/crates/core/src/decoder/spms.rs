//! Flooding-schedule SP-MS decoder over a [`TannerGraph`].

use crate::code_graph::TannerGraph;
use crate::message::{QuantizedMessage, Sign};
use crate::weights::P2Weight;

use super::rules::{saturate, vn_sum, zero_sum_sign};
use super::{
    max_magnitude, syndrome_weight, DecodeError, DecodeOutcome, DecoderConfig, DecoderFamily, MuPolicy,
    OffsetTable, TieBreak,
};

/// Per-edge decoder state, indexed by dense edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeState {
    pub v2c: Vec<QuantizedMessage>,
    pub c2v: Vec<QuantizedMessage>,
    /// Sign-preserving factor for the next VN update on each edge.
    pub mu: Vec<Sign>,
}

/// Snapshot handed to an observer after each iteration.
pub struct IterationView<'a> {
    /// 0-based iteration that just finished.
    pub iteration: usize,
    pub edges: &'a EdgeState,
    pub bits: &'a [u8],
    pub syndrome_weight: usize,
}

pub struct SpmsDecoder<'g> {
    graph: &'g TannerGraph,
    max_iters: usize,
    max_mag: u8,
    offsets: OffsetTable,
    tie_break: TieBreak,
    /// Weight per iteration for VNs flagged in `weighted`.
    schedule: Vec<P2Weight>,
    weighted: Vec<bool>,
    state: EdgeState,
    node_mu: Vec<Sign>,
    bits: Vec<u8>,
}

impl<'g> SpmsDecoder<'g> {
    pub fn new(graph: &'g TannerGraph, config: &DecoderConfig) -> Result<Self, DecodeError> {
        if config.family != DecoderFamily::SpMs {
            return Err(DecodeError::WrongFamily(config.family));
        }
        config.validate()?;
        let (schedule, weighted) = match &config.weights {
            Some(s) => {
                let compiled = s.compile()?;
                let weighted = (0..graph.n_vars())
                    .map(|v| compiled.target_degrees.contains(&graph.vn_degree(v)))
                    .collect();
                (compiled.per_iteration, weighted)
            }
            None => (Vec::new(), vec![false; graph.n_vars()]),
        };
        let e = graph.n_edges();
        let zero = QuantizedMessage::new(Sign::Plus, 0);
        Ok(SpmsDecoder {
            graph,
            max_iters: config.max_iters,
            max_mag: max_magnitude(config.q),
            offsets: config.offsets.clone(),
            tie_break: config.tie_break,
            schedule,
            weighted,
            state: EdgeState {
                v2c: vec![zero; e],
                c2v: vec![zero; e],
                mu: vec![Sign::Plus; e],
            },
            node_mu: vec![Sign::Plus; graph.n_vars()],
            bits: vec![0; graph.n_vars()],
        })
    }

    pub fn graph(&self) -> &'g TannerGraph {
        self.graph
    }

    pub fn decode(&mut self, channel: &[QuantizedMessage]) -> Result<DecodeOutcome, DecodeError> {
        self.decode_observed(channel, |_| {})
    }

    /// Decodes one frame, calling `observer` after every iteration.
    pub fn decode_observed(
        &mut self,
        channel: &[QuantizedMessage],
        mut observer: impl FnMut(IterationView<'_>),
    ) -> Result<DecodeOutcome, DecodeError> {
        let graph = self.graph;
        if channel.len() != graph.n_vars() {
            return Err(DecodeError::DimensionMismatch {
                expected: graph.n_vars(),
                got: channel.len(),
            });
        }
        self.initialize(channel);
        let mut trace = Vec::with_capacity(self.max_iters + 1);
        let weight0 = syndrome_weight(graph, &self.bits);
        trace.push(weight0);
        if weight0 == 0 {
            return Ok(self.outcome(true, 0, trace));
        }
        for iteration in 0..self.max_iters {
            self.update_checks();
            self.update_variables(channel, iteration);
            let weight = syndrome_weight(graph, &self.bits);
            trace.push(weight);
            log::trace!("spms iteration={iteration} syndrome_weight={weight}");
            observer(IterationView {
                iteration,
                edges: &self.state,
                bits: &self.bits,
                syndrome_weight: weight,
            });
            if weight == 0 {
                return Ok(self.outcome(true, iteration + 1, trace));
            }
        }
        Ok(self.outcome(false, self.max_iters, trace))
    }

    fn outcome(&self, converged: bool, iterations_used: usize, syndrome_trace: Vec<usize>) -> DecodeOutcome {
        DecodeOutcome {
            bits: self.bits.clone(),
            converged,
            iterations_used,
            syndrome_trace,
        }
    }

    fn initialize(&mut self, channel: &[QuantizedMessage]) {
        let zero_offsets = OffsetTable::zero();
        for (v, &ch) in channel.iter().enumerate() {
            let first = saturate(ch.value() << 4, ch.sign, self.max_mag, &zero_offsets);
            for e in self.graph.vn_edges(v) {
                self.state.v2c[e] = first;
                self.state.mu[e] = ch.sign;
            }
            self.node_mu[v] = ch.sign;
            self.bits[v] = ch.sign.bit();
        }
    }

    fn update_checks(&mut self) {
        let graph = self.graph;
        let state = &mut self.state;
        for c in 0..graph.n_checks() {
            let edges = graph.cn_edges(c);
            let mut parity = Sign::Plus;
            let (mut min1, mut min2, mut argmin) = (u8::MAX, u8::MAX, usize::MAX);
            for &e in edges {
                let m = state.v2c[e];
                parity = parity * m.sign;
                if m.magnitude < min1 {
                    min2 = min1;
                    min1 = m.magnitude;
                    argmin = e;
                } else if m.magnitude < min2 {
                    min2 = m.magnitude;
                }
            }
            for &e in edges {
                let m = state.v2c[e];
                let magnitude = if e == argmin { min2 } else { min1 };
                state.c2v[e] = QuantizedMessage::new(parity * m.sign, magnitude);
            }
        }
    }

    fn update_variables(&mut self, channel: &[QuantizedMessage], iteration: usize) {
        let graph = self.graph;
        let zero_sum = self.tie_break.zero_sum;
        let mu_policy = self.tie_break.mu;
        for (v, &ch) in channel.iter().enumerate() {
            let weight = if self.weighted[v] {
                Some(&self.schedule[iteration])
            } else {
                None
            };
            let edges = graph.vn_edges(v);
            let total: i32 = self.state.c2v[edges.clone()].iter().map(|m| m.value()).sum();
            for e in edges {
                let mu = self.state.mu[e];
                let extrinsic = total - self.state.c2v[e].value();
                let sum = vn_sum(ch, mu, extrinsic, weight);
                let out = saturate(sum, zero_sum_sign(zero_sum, ch, mu), self.max_mag, &self.offsets);
                debug_assert!(out.magnitude <= self.max_mag);
                self.state.v2c[e] = out;
                self.state.mu[e] = match mu_policy {
                    MuPolicy::PreviousMessage => out.sign,
                    MuPolicy::ChannelSign => ch.sign,
                };
            }
            let mu = self.node_mu[v];
            let sum = vn_sum(ch, mu, total, weight);
            let decision = Sign::of_int_or(sum, zero_sum_sign(zero_sum, ch, mu));
            self.bits[v] = decision.bit();
            self.node_mu[v] = match mu_policy {
                MuPolicy::PreviousMessage => decision,
                MuPolicy::ChannelSign => ch.sign,
            };
        }
    }
}
