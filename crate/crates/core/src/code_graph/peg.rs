//! Progressive edge growth (PEG) code construction.
//!
//! VNs are processed in descending degree order, so the high-degree nodes
//! are placed while the checks are still sparse. Each new edge of a VN goes to
//! a check node as far away as possible in the current graph: the BFS tree
//! from the VN is expanded until it either stops growing or covers every
//! check, and the candidates are the checks not yet reached at the last
//! depth before that happens. Among candidates the lowest current check
//! degree wins; remaining ties are broken with a seeded ChaCha8 stream, so
//! the output is a pure function of the inputs and the seed.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GraphError, TannerGraph};

struct Builder {
    vn_adj: Vec<Vec<u32>>,
    cn_adj: Vec<Vec<u32>>,
    cn_stamp: Vec<u32>,
    vn_stamp: Vec<u32>,
    stamp: u32,
    rng: ChaCha8Rng,
}

impl Builder {
    fn new(n_vars: usize, n_checks: usize, seed: u64) -> Self {
        Builder {
            vn_adj: vec![Vec::new(); n_vars],
            cn_adj: vec![Vec::new(); n_checks],
            cn_stamp: vec![0; n_checks],
            vn_stamp: vec![0; n_vars],
            stamp: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn n_checks(&self) -> usize {
        self.cn_adj.len()
    }

    /// Candidate checks for the next edge of `vn`.
    fn candidates(&mut self, vn: usize) -> Vec<u32> {
        if self.vn_adj[vn].is_empty() {
            return (0..self.n_checks() as u32).collect();
        }
        self.stamp += 1;
        let stamp = self.stamp;
        self.vn_stamp[vn] = stamp;
        let mut frontier: Vec<u32> = self.vn_adj[vn].clone();
        for &c in &frontier {
            self.cn_stamp[c as usize] = stamp;
        }
        let mut reached = frontier.len();
        loop {
            let mut next = Vec::new();
            for &c in &frontier {
                for &w in &self.cn_adj[c as usize] {
                    if self.vn_stamp[w as usize] == stamp {
                        continue;
                    }
                    self.vn_stamp[w as usize] = stamp;
                    for &c2 in &self.vn_adj[w as usize] {
                        if self.cn_stamp[c2 as usize] != stamp {
                            self.cn_stamp[c2 as usize] = stamp;
                            next.push(c2);
                        }
                    }
                }
            }
            if next.is_empty() {
                // Tree stopped growing: every unreached check is at infinite distance.
                return (0..self.n_checks() as u32)
                    .filter(|&c| self.cn_stamp[c as usize] != stamp)
                    .collect();
            }
            reached += next.len();
            if reached == self.n_checks() {
                return next;
            }
            frontier = next;
        }
    }

    fn pick(&mut self, candidates: &[u32]) -> u32 {
        let min_degree = candidates
            .iter()
            .map(|&c| self.cn_adj[c as usize].len())
            .min()
            .expect("candidate set is never empty");
        let ties: Vec<u32> = candidates
            .iter()
            .copied()
            .filter(|&c| self.cn_adj[c as usize].len() == min_degree)
            .collect();
        if ties.len() == 1 {
            ties[0]
        } else {
            ties[self.rng.random_range(0..ties.len() as u32) as usize]
        }
    }

    fn connect(&mut self, vn: usize, cn: u32) {
        self.vn_adj[vn].push(cn);
        self.cn_adj[cn as usize].push(vn as u32);
    }
}

/// Builds a PEG code with exactly the requested VN degree counts.
///
/// VN indices are assigned in ascending degree order; edges are placed
/// starting from the highest index. Fails when the degree
/// sequence cannot give every check at least two edges, when a degree
/// exceeds `n_checks`, or when the counts do not sum to `n_vars`.
pub fn construct_peg(
    n_vars: usize,
    vn_degree_counts: &BTreeMap<usize, usize>,
    n_checks: usize,
    seed: u64,
) -> Result<TannerGraph, GraphError> {
    construct_peg_capped(n_vars, vn_degree_counts, n_checks, usize::MAX, seed)
}

/// [`construct_peg`] with no check allowed above `max_check_degree` edges.
///
/// Full checks are dropped from the candidate set; if that empties it, the
/// edge goes to the lowest-degree non-full check not yet adjacent to the VN.
/// With `max_check_degree * n_checks` equal to the edge count every check
/// ends up with exactly that degree.
pub fn construct_peg_capped(
    n_vars: usize,
    vn_degree_counts: &BTreeMap<usize, usize>,
    n_checks: usize,
    max_check_degree: usize,
    seed: u64,
) -> Result<TannerGraph, GraphError> {
    if n_vars == 0 || n_checks == 0 {
        return Err(GraphError::Empty);
    }
    let total: usize = vn_degree_counts.values().sum();
    if total != n_vars {
        return Err(GraphError::InfeasibleDegrees(format!(
            "degree counts sum to {total}, expected {n_vars}"
        )));
    }
    if let Some((&d, _)) = vn_degree_counts.iter().find(|(&d, &c)| c > 0 && (d < 2 || d > n_checks)) {
        return Err(GraphError::InfeasibleDegrees(format!(
            "variable-node degree {d} outside 2..={n_checks}"
        )));
    }
    let n_edges: usize = vn_degree_counts.iter().map(|(d, c)| d * c).sum();
    if n_edges < 2 * n_checks {
        return Err(GraphError::InfeasibleDegrees(format!(
            "{n_edges} edges cannot give each of {n_checks} checks degree >= 2"
        )));
    }
    if n_edges > max_check_degree.saturating_mul(n_checks) {
        return Err(GraphError::InfeasibleDegrees(format!(
            "{n_edges} edges exceed {n_checks} checks of degree <= {max_check_degree}"
        )));
    }

    let degrees: Vec<usize> = vn_degree_counts
        .iter()
        .flat_map(|(&d, &c)| std::iter::repeat_n(d, c))
        .collect();
    let mut builder = Builder::new(n_vars, n_checks, seed);
    for (vn, &degree) in degrees.iter().enumerate().rev() {
        for _ in 0..degree {
            let mut candidates = builder.candidates(vn);
            if max_check_degree != usize::MAX {
                candidates.retain(|&c| builder.cn_adj[c as usize].len() < max_check_degree);
                if candidates.is_empty() {
                    candidates = (0..n_checks as u32)
                        .filter(|&c| {
                            builder.cn_adj[c as usize].len() < max_check_degree
                                && !builder.vn_adj[vn].contains(&c)
                        })
                        .collect();
                }
                if candidates.is_empty() {
                    return Err(GraphError::InfeasibleDegrees(format!(
                        "no check below degree {max_check_degree} left for variable {vn}"
                    )));
                }
            }
            let cn = builder.pick(&candidates);
            builder.connect(vn, cn);
        }
    }

    let vn_lists: Vec<Vec<usize>> = builder
        .vn_adj
        .into_iter()
        .map(|list| list.into_iter().map(|c| c as usize).collect())
        .collect();
    TannerGraph::from_vn_lists(n_checks, &vn_lists)
}
