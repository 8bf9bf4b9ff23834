use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::TannerGraph;

/// Node-count degree histograms of both sides plus the design rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeDistribution {
    pub vn_degrees: BTreeMap<usize, usize>,
    pub cn_degrees: BTreeMap<usize, usize>,
    /// Design rate `(N - M) / N`; assumes H has full row rank.
    pub rate: f64,
}

impl DegreeDistribution {
    pub fn n_vars(&self) -> usize {
        self.vn_degrees.values().sum()
    }

    pub fn n_checks(&self) -> usize {
        self.cn_degrees.values().sum()
    }

    /// Fraction of VNs having degree `degree` (the node-perspective λ coefficient).
    pub fn vn_fraction(&self, degree: usize) -> f64 {
        let count = self.vn_degrees.get(&degree).copied().unwrap_or(0);
        count as f64 / self.n_vars() as f64
    }
}

pub fn degree_report(graph: &TannerGraph) -> DegreeDistribution {
    let n = graph.n_vars();
    let m = graph.n_checks();
    DegreeDistribution {
        vn_degrees: TannerGraph::histogram((0..n).map(|v| graph.vn_degree(v))),
        cn_degrees: TannerGraph::histogram((0..m).map(|c| graph.cn_degree(c))),
        rate: (n as f64 - m as f64) / n as f64,
    }
}

/// VNs whose degree is in `degrees`, ascending.
pub fn select_nodes_by_degree(graph: &TannerGraph, degrees: &BTreeSet<usize>) -> Vec<usize> {
    (0..graph.n_vars())
        .filter(|&v| degrees.contains(&graph.vn_degree(v)))
        .collect()
}

/// Length of the shortest cycle, or `None` for a forest.
///
/// Runs a BFS from every VN over the bipartite graph; every cycle passes
/// through a VN so this is exact. Cost is O(N * E).
pub fn girth(graph: &TannerGraph) -> Option<usize> {
    let n = graph.n_vars();
    let total = n + graph.n_checks();
    // Node ids: VNs are 0..n, CNs are n..n+m.
    let mut dist = vec![usize::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut best = usize::MAX;

    for root in 0..n {
        for &t in &touched {
            dist[t] = usize::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            // A cycle found from depth d has length >= 2d + 1.
            if 2 * dist[u] + 1 >= best {
                break;
            }
            let neighbors: Vec<usize> = if u < n {
                graph.vn_neighbors(u).iter().map(|&c| c + n).collect()
            } else {
                graph.cn_neighbors(u - n).collect()
            };
            for w in neighbors {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                    if best <= 4 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 4 {
            break;
        }
    }
    (best != usize::MAX).then_some(best)
}

/// Rank of H over GF(2) by Gaussian elimination on packed rows.
///
/// Dense O(M^2 * N / 64); intended for desk-scale diagnostics.
pub fn gf2_rank(graph: &TannerGraph) -> usize {
    let words = graph.n_vars().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..graph.n_checks())
        .map(|c| {
            let mut row = vec![0u64; words];
            for v in graph.cn_neighbors(c) {
                row[v / 64] |= 1 << (v % 64);
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..graph.n_vars() {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
