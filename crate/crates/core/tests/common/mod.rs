//! Test-side reference implementations. They use exact rational arithmetic
//! and naive loops so they share no code path with the library decoders.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spms_core::code_graph::{construct_peg, TannerGraph};
use spms_core::message::{QuantizedMessage, Sign};

pub type R = Ratio<i64>;

/// Signed-zero message as (negative, magnitude).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Msg {
    pub neg: bool,
    pub mag: i64,
}

impl Msg {
    pub fn value(self) -> i64 {
        if self.neg {
            -self.mag
        } else {
            self.mag
        }
    }

    pub fn from_q(m: QuantizedMessage) -> Msg {
        Msg {
            neg: m.sign == Sign::Minus,
            mag: i64::from(m.magnitude),
        }
    }

    pub fn to_q(self) -> QuantizedMessage {
        QuantizedMessage::new(if self.neg { Sign::Minus } else { Sign::Plus }, self.mag as u8)
    }
}

/// Every message of the q-bit alphabet, both zeros included.
pub fn alphabet(q: u8) -> Vec<Msg> {
    let max = (1i64 << (q - 1)) - 1;
    let mut out = Vec::new();
    for mag in 0..=max {
        out.push(Msg { neg: true, mag });
        out.push(Msg { neg: false, mag });
    }
    out
}

/// Quantized channel values `-7..=7` (zero carries the `+` sign).
pub fn channel_values() -> Vec<Msg> {
    (-7i64..=7)
        .map(|v| Msg {
            neg: v < 0,
            mag: v.abs(),
        })
        .collect()
}

/// Saturation with offset applied to an exact rational sum. `tie` gives the
/// sign of an exact zero.
pub fn ref_saturate(s: R, tie: bool, q: u8, phi: &dyn Fn(i64) -> i64) -> Msg {
    let zero = R::from_integer(0);
    let neg = if s > zero {
        false
    } else if s < zero {
        true
    } else {
        tie
    };
    let floored = if s < zero { -s } else { s }.floor().to_integer();
    let max = (1i64 << (q - 1)) - 1;
    Msg {
        neg,
        mag: (floored - phi(floored)).max(0).min(max),
    }
}

pub fn no_offset(_: i64) -> i64 {
    0
}

/// `I + w (mu / 2 + sum)` as an exact rational.
pub fn ref_sum(channel: Msg, mu_neg: bool, incoming: &[Msg], w: R) -> R {
    let mu = if mu_neg { R::new(-1, 2) } else { R::new(1, 2) };
    let sum: i64 = incoming.iter().map(|m| m.value()).sum();
    R::from_integer(channel.value()) + w * (mu + R::from_integer(sum))
}

/// Zero-sum sign: channel when it has magnitude, otherwise mu.
pub fn ref_tie(channel: Msg, mu_neg: bool) -> bool {
    if channel.mag > 0 {
        channel.neg
    } else {
        mu_neg
    }
}

pub fn ref_vn_update(channel: Msg, incoming: &[Msg], mu_neg: bool, w: R, q: u8, phi: &dyn Fn(i64) -> i64) -> Msg {
    ref_saturate(ref_sum(channel, mu_neg, incoming, w), ref_tie(channel, mu_neg), q, phi)
}

pub fn ref_cn_update(incoming: &[Msg]) -> Msg {
    let negatives = incoming.iter().filter(|m| m.neg).count();
    Msg {
        neg: negatives % 2 == 1,
        mag: incoming.iter().map(|m| m.mag).min().unwrap(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefOutcome {
    pub bits: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
    pub trace: Vec<usize>,
}

/// Naive flooding SP-MS decoder over adjacency lists.
///
/// `weights` maps iteration to weight for VNs whose degree is in `targets`;
/// other VNs use weight 1.
pub fn ref_decode(
    vn_lists: &[Vec<usize>],
    n_checks: usize,
    channel: &[Msg],
    q: u8,
    weighting: Option<(&BTreeSet<usize>, &[R])>,
    max_iters: usize,
    phi: &dyn Fn(i64) -> i64,
) -> RefOutcome {
    let n = vn_lists.len();
    let mut cn_lists = vec![Vec::new(); n_checks];
    for (v, cs) in vn_lists.iter().enumerate() {
        for &c in cs {
            cn_lists[c].push(v);
        }
    }
    let max = (1i64 << (q - 1)) - 1;
    let mut v2c: HashMap<(usize, usize), Msg> = HashMap::new();
    let mut c2v: HashMap<(usize, usize), Msg> = HashMap::new();
    let mut mu: HashMap<(usize, usize), bool> = HashMap::new();
    let mut node_mu = vec![false; n];
    let mut bits = vec![0u8; n];
    for v in 0..n {
        let ch = channel[v];
        for &c in &vn_lists[v] {
            v2c.insert(
                (v, c),
                Msg {
                    neg: ch.neg,
                    mag: ch.mag.min(max),
                },
            );
            mu.insert((v, c), ch.neg);
        }
        node_mu[v] = ch.neg;
        bits[v] = u8::from(ch.neg);
    }
    let syndrome = |bits: &[u8]| {
        cn_lists
            .iter()
            .filter(|vs| vs.iter().map(|&v| bits[v] as usize).sum::<usize>() % 2 == 1)
            .count()
    };
    let mut trace = vec![syndrome(&bits)];
    if trace[0] == 0 {
        return RefOutcome {
            bits,
            converged: true,
            iterations: 0,
            trace,
        };
    }
    for l in 0..max_iters {
        for (c, vs) in cn_lists.iter().enumerate() {
            for &v in vs {
                let others: Vec<Msg> = vs.iter().filter(|&&u| u != v).map(|&u| v2c[&(u, c)]).collect();
                c2v.insert((c, v), ref_cn_update(&others));
            }
        }
        for v in 0..n {
            let ch = channel[v];
            let w = match weighting {
                Some((targets, values)) if targets.contains(&vn_lists[v].len()) => values[l],
                _ => R::from_integer(1),
            };
            for &c in &vn_lists[v] {
                let others: Vec<Msg> = vn_lists[v]
                    .iter()
                    .filter(|&&d| d != c)
                    .map(|&d| c2v[&(d, v)])
                    .collect();
                let out = ref_vn_update(ch, &others, mu[&(v, c)], w, q, phi);
                v2c.insert((v, c), out);
                mu.insert((v, c), out.neg);
            }
            let all: Vec<Msg> = vn_lists[v].iter().map(|&d| c2v[&(d, v)]).collect();
            let s = ref_sum(ch, node_mu[v], &all, w);
            let zero = R::from_integer(0);
            let neg = if s == zero { ref_tie(ch, node_mu[v]) } else { s < zero };
            bits[v] = u8::from(neg);
            node_mu[v] = neg;
        }
        let weight = syndrome(&bits);
        trace.push(weight);
        if weight == 0 {
            return RefOutcome {
                bits,
                converged: true,
                iterations: l + 1,
                trace,
            };
        }
    }
    RefOutcome {
        bits,
        converged: false,
        iterations: max_iters,
        trace,
    }
}

/// A random codeword of the code, from a nullspace basis built by plain
/// Gaussian elimination on dense rows.
pub fn random_codeword(graph: &TannerGraph, rng: &mut impl Rng) -> Vec<u8> {
    let n = graph.n_vars();
    let mut rows: Vec<Vec<u8>> = (0..graph.n_checks())
        .map(|c| {
            let mut row = vec![0u8; n];
            for v in graph.cn_neighbors(c) {
                row[v] = 1;
            }
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] == 1 {
                for j in 0..n {
                    rows[i][j] ^= rows[r][j];
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut x = vec![0u8; n];
    for &f in &free {
        x[f] = rng.random_range(0..2u8);
    }
    for (i, &p) in pivots.iter().enumerate() {
        let parity = free.iter().map(|&f| rows[i][f] & x[f]).fold(0, |a, b| a ^ b);
        x[p] = parity;
    }
    x
}

/// Every check of `graph` is satisfied by `x`.
pub fn is_codeword(graph: &TannerGraph, x: &[u8]) -> bool {
    (0..graph.n_checks()).all(|c| graph.cn_neighbors(c).map(|v| x[v]).fold(0, |a, b| a ^ b) == 0)
}

/// Desk-scale code with the EPON degree proportions: N = 2048, M = 356.
pub fn desk_code() -> TannerGraph {
    construct_peg(2048, &desk_counts(), 356, 1).expect("feasible")
}

pub fn desk_counts() -> BTreeMap<usize, usize> {
    BTreeMap::from([(3, 1484), (6, 505), (11, 30), (12, 29)])
}

/// N = 1024 version with 178 checks.
pub fn code_1024(seed: u64) -> TannerGraph {
    construct_peg(1024, &BTreeMap::from([(3, 742), (6, 252), (11, 15), (12, 15)]), 178, seed).expect("feasible")
}

/// Uniform quantized channel values drawn from `-7..=7` with random signed zeros.
pub fn random_channel(rng: &mut ChaCha8Rng, n: usize) -> Vec<QuantizedMessage> {
    (0..n)
        .map(|_| {
            let mag = rng.random_range(0..=7u8);
            let sign = if rng.random_bool(0.5) { Sign::Minus } else { Sign::Plus };
            QuantizedMessage::new(sign, mag)
        })
        .collect()
}

/// Channel values biased toward the all-zero word so decoding succeeds sometimes.
pub fn noisy_zero_channel(rng: &mut ChaCha8Rng, n: usize, p_flip: f64) -> Vec<QuantizedMessage> {
    (0..n)
        .map(|_| {
            let mag = rng.random_range(0..=7u8);
            let sign = if rng.random_bool(p_flip) { Sign::Minus } else { Sign::Plus };
            QuantizedMessage::new(sign, mag)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
