//! Quantized sign-preserving min-sum LDPC decoding with iteration-dependent
//! shift-and-add message weights, plus the code construction, channel and
//! Monte-Carlo tooling around it.

pub mod channel;
pub mod code_graph;
pub mod decoder;
pub mod message;
pub mod montecarlo;
pub mod weights;
