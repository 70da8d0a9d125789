use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{content_lines, header_value, parse_edge_line, parse_header_field, Edge, Graph};

/// An ordered split of a host graph's edges into `k` parts, one per plane.
///
/// [`EdgePartition::new`] enforces the partition invariants. Partitions read
/// from files go through [`EdgePartition::unchecked`] so that broken inputs
/// can still reach a verifier and be reported rather than rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePartition {
    host: Graph,
    parts: Vec<BTreeSet<Edge>>,
}

impl EdgePartition {
    pub fn new(host: Graph, parts: Vec<BTreeSet<Edge>>) -> Result<Self> {
        let p = EdgePartition::unchecked(host, parts);
        match p.invariant_violations().first() {
            Some(msg) => Err(Error::domain(msg.clone())),
            None => Ok(p),
        }
    }

    pub fn unchecked(host: Graph, parts: Vec<BTreeSet<Edge>>) -> Self {
        EdgePartition { host, parts }
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn parts(&self) -> &[BTreeSet<Edge>] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// `G_i = (V, E_i)`: the host's full vertex set with part `i`'s edges (0-based).
    pub fn plane_graph(&self, i: usize) -> Result<Graph> {
        let part = self
            .parts
            .get(i)
            .ok_or_else(|| Error::domain(format!("no part {i}")))?;
        self.host.spanning_subgraph(part.iter().copied())
    }

    /// Empty when the parts are pairwise disjoint host edges covering the host.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let mut seen: BTreeSet<Edge> = BTreeSet::new();
        for (i, part) in self.parts.iter().enumerate() {
            for e in part {
                if !self.host.edges().contains(e) {
                    problems.push(format!("part {} edge {e:?} is not a host edge", i + 1));
                }
                if !seen.insert(*e) {
                    problems.push(format!("edge {e:?} appears in more than one part"));
                }
            }
        }
        let missing = self.host.edges().difference(&seen).count();
        if missing > 0 {
            problems.push(format!("{missing} host edges are in no part"));
        }
        problems
    }

    /// Canonical text: `partition k=<k> width=<d>`, then per part a
    /// `plane <i> edges=<m>` header and its sorted edge lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("partition k={} width={}\n", self.k(), self.host.width());
        for (i, part) in self.parts.iter().enumerate() {
            s.push_str(&format!("plane {} edges={}\n", i + 1, part.len()));
            for e in part {
                s.push_str(&format!("{e}\n"));
            }
        }
        s
    }

    /// Parses the text form. The host becomes the graph spanned by all listed
    /// edges; invariants are not enforced here.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text).peekable();
        let (n, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `partition` header"))?;
        let k = parse_header_field(n, header, "partition", "k")?;
        let width = header_value(n, header, "width")?;
        let mut parts = Vec::with_capacity(k);
        for i in 1..=k {
            let (n, line) = lines
                .next()
                .ok_or_else(|| Error::parse(n, format!("missing header for plane {i}")))?;
            let mut tokens = line.split_whitespace();
            let index = match (tokens.next(), tokens.next().map(str::parse::<usize>)) {
                (Some("plane"), Some(Ok(index))) => index,
                _ => return Err(Error::parse(n, "expected `plane <i> edges=<m>`")),
            };
            if index != i {
                return Err(Error::parse(n, format!("expected plane {i}, found {index}")));
            }
            let m = header_value(n, line, "edges")?;
            let mut part = BTreeSet::new();
            for _ in 0..m {
                let (n, line) = lines
                    .next()
                    .ok_or_else(|| Error::parse(n, format!("plane {i} ends before {m} edges")))?;
                let e = parse_edge_line(n, line, width)?;
                if !part.insert(e) {
                    return Err(Error::parse(n, format!("duplicate edge {e} in plane {i}")));
                }
            }
            parts.push(part);
        }
        if let Some((n, _)) = lines.next() {
            return Err(Error::parse(n, "trailing content after last plane"));
        }
        let host = Graph::from_edges(width, parts.iter().flatten().copied())?;
        Ok(EdgePartition::unchecked(host, parts))
    }
}
