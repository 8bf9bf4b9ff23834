//! Reader and writer for the alist sparse-matrix format.
//!
//! Layout: `N M`, `max_vn_deg max_cn_deg`, the N VN degrees, the M CN
//! degrees, then N lines of 1-based CN neighbors and M lines of 1-based VN
//! neighbors. A zero entry in a neighbor line is padding.

use std::fmt::Write as _;

use super::{GraphError, TannerGraph};

struct Line<'a> {
    number: usize,
    fields: Vec<&'a str>,
}

fn alist_err(line: usize, field: usize, message: impl Into<String>) -> GraphError {
    GraphError::Alist {
        line,
        field,
        message: message.into(),
    }
}

fn parse_field(line: &Line<'_>, field: usize) -> Result<usize, GraphError> {
    let raw = line
        .fields
        .get(field)
        .ok_or_else(|| alist_err(line.number, field + 1, "missing field"))?;
    raw.parse::<usize>()
        .map_err(|_| alist_err(line.number, field + 1, format!("expected a non-negative integer, found {raw:?}")))
}

fn parse_fixed(line: &Line<'_>, count: usize, what: &str) -> Result<Vec<usize>, GraphError> {
    if line.fields.len() != count {
        return Err(alist_err(
            line.number,
            line.fields.len().min(count) + 1,
            format!("{what}: expected {count} fields, found {}", line.fields.len()),
        ));
    }
    (0..count).map(|i| parse_field(line, i)).collect()
}

/// Parses one neighbor line, dropping zero padding and converting to 0-based.
fn parse_neighbors(
    line: &Line<'_>,
    degree: usize,
    max_degree: usize,
    upper: usize,
) -> Result<Vec<usize>, GraphError> {
    let mut out = Vec::with_capacity(degree);
    for field in 0..line.fields.len() {
        let value = parse_field(line, field)?;
        if value == 0 {
            continue;
        }
        if value > upper {
            return Err(alist_err(
                line.number,
                field + 1,
                format!("neighbor index {value} out of range 1..={upper}"),
            ));
        }
        if out.contains(&(value - 1)) {
            return Err(alist_err(line.number, field + 1, format!("duplicate neighbor {value}")));
        }
        out.push(value - 1);
    }
    if out.len() != degree {
        return Err(alist_err(
            line.number,
            1,
            format!("degree list says {degree} neighbors, line has {}", out.len()),
        ));
    }
    if degree > max_degree {
        return Err(alist_err(
            line.number,
            1,
            format!("degree {degree} exceeds declared maximum {max_degree}"),
        ));
    }
    Ok(out)
}

/// A parity-check matrix exactly as described by an alist file.
///
/// Unlike [`TannerGraph`] this carries no degree constraints; it only
/// enforces the format's own consistency rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlistMatrix {
    pub n_vars: usize,
    pub n_checks: usize,
    /// 0-based CN neighbors per VN, ascending.
    pub vn_lists: Vec<Vec<usize>>,
    /// 0-based VN neighbors per CN, ascending.
    pub cn_lists: Vec<Vec<usize>>,
}

impl AlistMatrix {
    /// Parses alist text. Both neighbor sections must describe the same edges.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| Line {
                number: i + 1,
                fields: l.split_whitespace().collect(),
            })
            .filter(|l| !l.fields.is_empty());
        let eof_line = text.lines().count() + 1;
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| alist_err(eof_line, 1, format!("unexpected end of input, expected {what}")))
        };

        let header = next("header")?;
        let dims = parse_fixed(&header, 2, "header")?;
        let (n_vars, n_checks) = (dims[0], dims[1]);
        if n_vars == 0 || n_checks == 0 {
            return Err(alist_err(header.number, 1, "dimensions must be positive"));
        }
        let max_line = next("maximum degrees")?;
        let max = parse_fixed(&max_line, 2, "maximum degrees")?;
        let vn_deg_line = next("variable-node degrees")?;
        let vn_degrees = parse_fixed(&vn_deg_line, n_vars, "variable-node degrees")?;
        let cn_deg_line = next("check-node degrees")?;
        let cn_degrees = parse_fixed(&cn_deg_line, n_checks, "check-node degrees")?;

        let mut vn_lists = Vec::with_capacity(n_vars);
        for &degree in &vn_degrees {
            let line = next("variable-node neighbor line")?;
            let mut list = parse_neighbors(&line, degree, max[0], n_checks)?;
            list.sort_unstable();
            vn_lists.push(list);
        }
        let mut cn_lists = Vec::with_capacity(n_checks);
        let mut cn_line_numbers = Vec::with_capacity(n_checks);
        for &degree in &cn_degrees {
            let line = next("check-node neighbor line")?;
            cn_line_numbers.push(line.number);
            let mut list = parse_neighbors(&line, degree, max[1], n_vars)?;
            list.sort_unstable();
            cn_lists.push(list);
        }
        drop(next);
        if let Some(extra) = lines.next() {
            return Err(alist_err(extra.number, 1, "trailing data after check-node section"));
        }

        let derived = transpose(&vn_lists, n_checks);
        for (cn, list) in cn_lists.iter().enumerate() {
            if *list != derived[cn] {
                return Err(alist_err(
                    cn_line_numbers[cn],
                    1,
                    format!("check node {} disagrees with the variable-node section", cn + 1),
                ));
            }
        }
        Ok(AlistMatrix {
            n_vars,
            n_checks,
            vn_lists,
            cn_lists,
        })
    }

    /// Builds the matrix from dense rows of H.
    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let n_vars = rows.first().map_or(0, Vec::len);
        let cn_lists: Vec<Vec<usize>> = rows
            .iter()
            .map(|row| (0..row.len()).filter(|&i| row[i] != 0).collect())
            .collect();
        let vn_lists = transpose(&cn_lists, n_vars);
        AlistMatrix {
            n_vars,
            n_checks: rows.len(),
            vn_lists,
            cn_lists,
        }
    }

    pub fn n_edges(&self) -> usize {
        self.vn_lists.iter().map(Vec::len).sum()
    }

    /// Canonical alist text: ascending neighbors, each line zero-padded to
    /// the maximum degree of its side.
    pub fn to_alist(&self) -> String {
        let max_vn = self.vn_lists.iter().map(Vec::len).max().unwrap_or(0);
        let max_cn = self.cn_lists.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n_vars, self.n_checks);
        let _ = writeln!(out, "{max_vn} {max_cn}");
        push_joined(&mut out, self.vn_lists.iter().map(Vec::len));
        push_joined(&mut out, self.cn_lists.iter().map(Vec::len));
        for (lists, width) in [(&self.vn_lists, max_vn), (&self.cn_lists, max_cn)] {
            for list in lists {
                let padding = std::iter::repeat_n(0, width - list.len());
                push_joined(&mut out, list.iter().map(|&i| i + 1).chain(padding));
            }
        }
        out
    }

    /// Applies the graph invariants (no degenerate nodes).
    pub fn into_graph(self) -> Result<TannerGraph, GraphError> {
        TannerGraph::from_vn_lists(self.n_checks, &self.vn_lists)
    }
}

impl From<&TannerGraph> for AlistMatrix {
    fn from(graph: &TannerGraph) -> Self {
        AlistMatrix {
            n_vars: graph.n_vars(),
            n_checks: graph.n_checks(),
            vn_lists: graph.vn_lists(),
            cn_lists: graph.cn_lists(),
        }
    }
}

fn transpose(lists: &[Vec<usize>], n_targets: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n_targets];
    for (src, list) in lists.iter().enumerate() {
        for &dst in list {
            out[dst].push(src);
        }
    }
    out
}

/// Parses alist text into a [`TannerGraph`].
pub fn load_alist(text: &str) -> Result<TannerGraph, GraphError> {
    let graph = AlistMatrix::parse(text)?.into_graph()?;
    debug_assert!(graph.is_consistent());
    Ok(graph)
}

/// Serializes a graph as canonical alist text.
pub fn write_alist(graph: &TannerGraph) -> String {
    AlistMatrix::from(graph).to_alist()
}

fn push_joined(out: &mut String, values: impl Iterator<Item = usize>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}
