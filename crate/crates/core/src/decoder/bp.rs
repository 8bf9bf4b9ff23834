//! Floating-point sum-product reference decoder.

use crate::code_graph::TannerGraph;

use super::{syndrome_weight, DecodeError, DecodeOutcome, DecoderConfig, DecoderFamily};

/// Largest CN message magnitude. Beyond this `tanh(x / 2)` rounds to 1 in
/// double precision and `atanh` would return infinity.
pub const BP_MESSAGE_CLAMP: f64 = 19.07;

pub struct BpDecoder<'g> {
    graph: &'g TannerGraph,
    max_iters: usize,
    clamp: f64,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    scratch: Vec<f64>,
    bits: Vec<u8>,
}

impl<'g> BpDecoder<'g> {
    pub fn new(graph: &'g TannerGraph, config: &DecoderConfig) -> Result<Self, DecodeError> {
        if config.family != DecoderFamily::BpFloat {
            return Err(DecodeError::WrongFamily(config.family));
        }
        config.validate()?;
        let max_cn = (0..graph.n_checks()).map(|c| graph.cn_degree(c)).max().unwrap_or(0);
        Ok(BpDecoder {
            graph,
            max_iters: config.max_iters,
            clamp: BP_MESSAGE_CLAMP,
            v2c: vec![0.0; graph.n_edges()],
            c2v: vec![0.0; graph.n_edges()],
            scratch: vec![0.0; max_cn],
            bits: vec![0; graph.n_vars()],
        })
    }

    pub fn with_clamp(mut self, clamp: f64) -> Self {
        self.clamp = clamp;
        self
    }

    pub fn decode(&mut self, llrs: &[f64]) -> Result<DecodeOutcome, DecodeError> {
        let graph = self.graph;
        if llrs.len() != graph.n_vars() {
            return Err(DecodeError::DimensionMismatch {
                expected: graph.n_vars(),
                got: llrs.len(),
            });
        }
        if let Some(&bad) = llrs.iter().find(|l| l.is_nan()) {
            return Err(DecodeError::NonFinite(bad));
        }
        for (v, &l) in llrs.iter().enumerate() {
            for e in graph.vn_edges(v) {
                self.v2c[e] = l;
            }
            self.bits[v] = u8::from(l < 0.0);
        }
        let mut trace = Vec::with_capacity(self.max_iters + 1);
        trace.push(syndrome_weight(graph, &self.bits));
        if trace[0] == 0 {
            return Ok(self.outcome(true, 0, trace));
        }
        for iteration in 0..self.max_iters {
            self.update_checks();
            self.update_variables(llrs);
            let weight = syndrome_weight(graph, &self.bits);
            trace.push(weight);
            log::trace!("bp iteration={iteration} syndrome_weight={weight}");
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

    fn update_checks(&mut self) {
        let graph = self.graph;
        for c in 0..graph.n_checks() {
            let edges = graph.cn_edges(c);
            let t = &mut self.scratch[..edges.len()];
            for (slot, &e) in t.iter_mut().zip(edges) {
                *slot = (self.v2c[e] / 2.0).tanh();
            }
            // Extrinsic products via a forward pass stored in c2v and a
            // running suffix product.
            let mut prefix = 1.0;
            for (i, &e) in edges.iter().enumerate() {
                self.c2v[e] = prefix;
                prefix *= t[i];
            }
            let mut suffix = 1.0;
            for (i, &e) in edges.iter().enumerate().rev() {
                let product = self.c2v[e] * suffix;
                self.c2v[e] = (2.0 * product.atanh()).clamp(-self.clamp, self.clamp);
                suffix *= t[i];
            }
        }
    }

    fn update_variables(&mut self, llrs: &[f64]) {
        let graph = self.graph;
        for (v, &l) in llrs.iter().enumerate() {
            let edges = graph.vn_edges(v);
            let total: f64 = self.c2v[edges.clone()].iter().sum();
            for e in edges {
                self.v2c[e] = l + (total - self.c2v[e]);
            }
            self.bits[v] = u8::from(l + total < 0.0);
        }
    }
}
