//! Tanner-graph representation of LDPC codes.
//!
//! A [`TannerGraph`] stores the bipartite graph between variable nodes (VNs,
//! columns of H) and check nodes (CNs, rows of H). Edges carry a dense id in
//! `0..n_edges()`, assigned in VN-major order: the edges of VN `v` are the
//! contiguous range [`TannerGraph::vn_edges`], sorted by CN index. The CN view
//! lists the same edge ids grouped per check, sorted by VN index.
//!
//! Graphs are immutable once built and are shared read-only between
//! simulation workers.

mod alist;
mod analysis;
mod peg;

pub use alist::{load_alist, write_alist, AlistMatrix};
pub use analysis::{degree_report, girth, gf2_rank, select_nodes_by_degree, DegreeDistribution};
pub use peg::{construct_peg, construct_peg_capped};

use std::collections::BTreeMap;
use std::ops::Range;

use thiserror::Error;

/// Which side of the bipartite graph a node lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Variable,
    Check,
}

impl std::fmt::Display for NodeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeKind::Variable => write!(f, "variable node"),
            NodeKind::Check => write!(f, "check node"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("alist line {line}, field {field}: {message}")]
    Alist {
        line: usize,
        field: usize,
        message: String,
    },
    #[error("{kind} {index} has degree {degree}; every node needs degree >= 2")]
    DegenerateNode {
        kind: NodeKind,
        index: usize,
        degree: usize,
    },
    #[error("duplicate edge between variable node {vn} and check node {cn}")]
    DuplicateEdge { vn: usize, cn: usize },
    #[error("variable node {vn} references check node {cn}, but there are only {n_checks}")]
    NeighborOutOfRange {
        vn: usize,
        cn: usize,
        n_checks: usize,
    },
    #[error("graph must have at least one variable node and one check node")]
    Empty,
    #[error("infeasible degree sequence: {0}")]
    InfeasibleDegrees(String),
}

/// Sparse bipartite code graph with a dense edge numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n_vars: usize,
    n_checks: usize,
    // VN-major CSR: edges of VN v are vn_offsets[v]..vn_offsets[v + 1].
    vn_offsets: Vec<usize>,
    edge_vn: Vec<usize>,
    edge_cn: Vec<usize>,
    // CN view: edge ids of CN c are cn_edges[cn_offsets[c]..cn_offsets[c + 1]].
    cn_offsets: Vec<usize>,
    cn_edges: Vec<usize>,
}

impl TannerGraph {
    /// Builds a graph from per-VN lists of CN neighbors.
    ///
    /// The lists need not be sorted. Duplicate neighbors, out-of-range
    /// indices and nodes of degree < 2 (on either side) are rejected.
    pub fn from_vn_lists(n_checks: usize, vn_lists: &[Vec<usize>]) -> Result<Self, GraphError> {
        let n_vars = vn_lists.len();
        if n_vars == 0 || n_checks == 0 {
            return Err(GraphError::Empty);
        }
        let mut vn_offsets = Vec::with_capacity(n_vars + 1);
        let mut edge_vn = Vec::new();
        let mut edge_cn = Vec::new();
        vn_offsets.push(0);
        for (vn, list) in vn_lists.iter().enumerate() {
            let mut sorted = list.clone();
            sorted.sort_unstable();
            for pair in sorted.windows(2) {
                if pair[0] == pair[1] {
                    return Err(GraphError::DuplicateEdge { vn, cn: pair[0] });
                }
            }
            for &cn in &sorted {
                if cn >= n_checks {
                    return Err(GraphError::NeighborOutOfRange { vn, cn, n_checks });
                }
                edge_vn.push(vn);
                edge_cn.push(cn);
            }
            vn_offsets.push(edge_vn.len());
        }

        let mut cn_degree = vec![0usize; n_checks];
        for &cn in &edge_cn {
            cn_degree[cn] += 1;
        }
        let mut cn_offsets = Vec::with_capacity(n_checks + 1);
        cn_offsets.push(0);
        for &d in &cn_degree {
            cn_offsets.push(cn_offsets.last().unwrap() + d);
        }
        let mut fill = cn_offsets[..n_checks].to_vec();
        let mut cn_edges = vec![0usize; edge_cn.len()];
        // Edges are visited in VN-ascending order, so each CN list ends up sorted by VN.
        for (e, &cn) in edge_cn.iter().enumerate() {
            cn_edges[fill[cn]] = e;
            fill[cn] += 1;
        }

        let graph = TannerGraph {
            n_vars,
            n_checks,
            vn_offsets,
            edge_vn,
            edge_cn,
            cn_offsets,
            cn_edges,
        };
        graph.check_min_degrees()?;
        Ok(graph)
    }

    /// Builds a graph from per-CN lists of VN neighbors (the rows of H).
    pub fn from_cn_lists(n_vars: usize, cn_lists: &[Vec<usize>]) -> Result<Self, GraphError> {
        let n_checks = cn_lists.len();
        let mut vn_lists = vec![Vec::new(); n_vars];
        for (cn, row) in cn_lists.iter().enumerate() {
            for &vn in row {
                if vn >= n_vars {
                    return Err(GraphError::NeighborOutOfRange {
                        vn,
                        cn,
                        n_checks: n_vars,
                    });
                }
                vn_lists[vn].push(cn);
            }
        }
        Self::from_vn_lists(n_checks, &vn_lists)
    }

    /// Builds a graph from a dense 0/1 parity-check matrix given row by row.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self, GraphError> {
        let n_vars = rows.first().map_or(0, Vec::len);
        let cn_lists: Vec<Vec<usize>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Self::from_cn_lists(n_vars, &cn_lists)
    }

    fn check_min_degrees(&self) -> Result<(), GraphError> {
        for vn in 0..self.n_vars {
            let degree = self.vn_degree(vn);
            if degree < 2 {
                return Err(GraphError::DegenerateNode {
                    kind: NodeKind::Variable,
                    index: vn,
                    degree,
                });
            }
        }
        for cn in 0..self.n_checks {
            let degree = self.cn_degree(cn);
            if degree < 2 {
                return Err(GraphError::DegenerateNode {
                    kind: NodeKind::Check,
                    index: cn,
                    degree,
                });
            }
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_checks(&self) -> usize {
        self.n_checks
    }

    pub fn n_edges(&self) -> usize {
        self.edge_vn.len()
    }

    pub fn vn_degree(&self, vn: usize) -> usize {
        self.vn_offsets[vn + 1] - self.vn_offsets[vn]
    }

    pub fn cn_degree(&self, cn: usize) -> usize {
        self.cn_offsets[cn + 1] - self.cn_offsets[cn]
    }

    /// Dense edge ids of VN `vn`, ordered by ascending CN index.
    pub fn vn_edges(&self, vn: usize) -> Range<usize> {
        self.vn_offsets[vn]..self.vn_offsets[vn + 1]
    }

    /// Dense edge ids of CN `cn`, ordered by ascending VN index.
    pub fn cn_edges(&self, cn: usize) -> &[usize] {
        &self.cn_edges[self.cn_offsets[cn]..self.cn_offsets[cn + 1]]
    }

    /// CN neighbors of `vn` in ascending order.
    pub fn vn_neighbors(&self, vn: usize) -> &[usize] {
        &self.edge_cn[self.vn_edges(vn)]
    }

    /// VN neighbors of `cn` in ascending order.
    pub fn cn_neighbors(&self, cn: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.cn_edges(cn).iter().map(|&e| self.edge_vn[e])
    }

    /// `(vn, cn)` endpoints of edge `edge`.
    pub fn edge_endpoints(&self, edge: usize) -> (usize, usize) {
        (self.edge_vn[edge], self.edge_cn[edge])
    }

    /// Dense id of the edge `(vn, cn)`, if present.
    pub fn edge_index(&self, vn: usize, cn: usize) -> Option<usize> {
        let range = self.vn_edges(vn);
        let start = range.start;
        self.edge_cn[range]
            .binary_search(&cn)
            .ok()
            .map(|offset| start + offset)
    }

    /// All edges as `(vn, cn)` pairs in dense-id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edge_vn.iter().copied().zip(self.edge_cn.iter().copied())
    }

    pub fn vn_degrees(&self) -> Vec<usize> {
        (0..self.n_vars).map(|v| self.vn_degree(v)).collect()
    }

    pub fn cn_degrees(&self) -> Vec<usize> {
        (0..self.n_checks).map(|c| self.cn_degree(c)).collect()
    }

    /// Re-derives the CN view from the VN view and compares edge sets.
    ///
    /// Returns true when both adjacency views describe the same edges and
    /// the edge numbering is a bijection onto `0..n_edges()`.
    pub fn is_consistent(&self) -> bool {
        let mut seen = vec![false; self.n_edges()];
        let mut from_cn: Vec<(usize, usize)> = Vec::with_capacity(self.n_edges());
        for cn in 0..self.n_checks {
            let mut prev = None;
            for &e in self.cn_edges(cn) {
                if e >= seen.len() || seen[e] || self.edge_cn[e] != cn {
                    return false;
                }
                seen[e] = true;
                let vn = self.edge_vn[e];
                if prev.is_some_and(|p| p >= vn) {
                    return false;
                }
                prev = Some(vn);
                from_cn.push((vn, cn));
            }
        }
        if !seen.iter().all(|&s| s) {
            return false;
        }
        from_cn.sort_unstable();
        let from_vn: Vec<(usize, usize)> = self.edges().collect();
        from_cn == from_vn
    }

    /// Per-CN sorted VN lists, i.e. the rows of H.
    pub fn cn_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n_checks)
            .map(|c| self.cn_neighbors(c).collect())
            .collect()
    }

    /// Per-VN sorted CN lists, i.e. the columns of H.
    pub fn vn_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n_vars)
            .map(|v| self.vn_neighbors(v).to_vec())
            .collect()
    }

    pub(crate) fn histogram(degrees: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for d in degrees {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> TannerGraph {
        // H = [[1,1,0,1],[0,1,1,1],[1,0,1,0]]
        TannerGraph::from_dense(&[vec![1, 1, 0, 1], vec![0, 1, 1, 1], vec![1, 0, 1, 0]]).unwrap()
    }

    #[test]
    fn edge_numbering_is_vn_major() {
        let g = toy();
        assert_eq!(g.n_edges(), 8);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(
            edges,
            vec![(0, 0), (0, 2), (1, 0), (1, 1), (2, 1), (2, 2), (3, 0), (3, 1)]
        );
        for (e, &(v, c)) in edges.iter().enumerate() {
            assert_eq!(g.edge_index(v, c), Some(e));
            assert_eq!(g.edge_endpoints(e), (v, c));
        }
        assert_eq!(g.edge_index(0, 1), None);
        assert!(g.is_consistent());
    }

    #[test]
    fn cn_view_sorted_by_vn() {
        let g = toy();
        assert_eq!(g.cn_lists(), vec![vec![0, 1, 3], vec![1, 2, 3], vec![0, 2]]);
    }

    #[test]
    fn rejects_degree_one_nodes() {
        let err = TannerGraph::from_vn_lists(2, &[vec![0], vec![0, 1], vec![1]]).unwrap_err();
        assert_eq!(
            err,
            GraphError::DegenerateNode {
                kind: NodeKind::Variable,
                index: 0,
                degree: 1
            }
        );
        let err = TannerGraph::from_vn_lists(3, &[vec![0, 1], vec![0, 1], vec![1, 2]]).unwrap_err();
        assert!(matches!(
            err,
            GraphError::DegenerateNode {
                kind: NodeKind::Check,
                index: 2,
                ..
            }
        ));
    }

    #[test]
    fn rejects_duplicates_and_range() {
        assert_eq!(
            TannerGraph::from_vn_lists(2, &[vec![1, 1]]).unwrap_err(),
            GraphError::DuplicateEdge { vn: 0, cn: 1 }
        );
        assert!(matches!(
            TannerGraph::from_vn_lists(2, &[vec![0, 2]]).unwrap_err(),
            GraphError::NeighborOutOfRange { cn: 2, .. }
        ));
        assert_eq!(TannerGraph::from_vn_lists(0, &[]).unwrap_err(), GraphError::Empty);
    }
}
