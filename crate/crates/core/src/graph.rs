use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::label::VertexLabel;

/// Largest hypercube dimension [`hypercube`] will build.
pub const MAX_CUBE_DIMENSION: usize = 16;

/// Undirected edge stored with the smaller label first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexLabel, VertexLabel);

impl Edge {
    pub fn new(u: VertexLabel, v: VertexLabel) -> Result<Self> {
        if u.width() != v.width() {
            return Err(Error::domain(format!("edge {u}-{v} mixes widths")));
        }
        if u == v {
            return Err(Error::domain(format!("self-loop at {u}")));
        }
        Ok(if u < v { Edge(u, v) } else { Edge(v, u) })
    }

    pub fn lo(self) -> VertexLabel {
        self.0
    }

    pub fn hi(self) -> VertexLabel {
        self.1
    }

    pub fn endpoints(self) -> [VertexLabel; 2] {
        [self.0, self.1]
    }

    pub fn has_endpoint(self, v: VertexLabel) -> bool {
        self.0 == v || self.1 == v
    }

    /// Endpoint opposite `v`, if `v` is an endpoint.
    pub fn other(self, v: VertexLabel) -> Option<VertexLabel> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.0, self.1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// Simple undirected graph on labels of one width.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    width: usize,
    vertices: BTreeSet<VertexLabel>,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn new(
        width: usize,
        vertices: impl IntoIterator<Item = VertexLabel>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let vertices: BTreeSet<_> = vertices.into_iter().collect();
        if let Some(v) = vertices.iter().find(|v| v.width() != width) {
            return Err(Error::domain(format!("vertex {v} is not width {width}")));
        }
        let edges: BTreeSet<_> = edges.into_iter().collect();
        for e in &edges {
            for v in e.endpoints() {
                if !vertices.contains(&v) {
                    return Err(Error::domain(format!("edge {e:?} uses unknown vertex {v}")));
                }
            }
        }
        Ok(Graph {
            width,
            vertices,
            edges,
        })
    }

    /// Graph whose vertex set is exactly the endpoints of `edges`.
    pub fn from_edges(width: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        let vertices: BTreeSet<_> = edges.iter().flat_map(|e| e.endpoints()).collect();
        Graph::new(width, vertices, edges)
    }

    pub fn empty(width: usize) -> Self {
        Graph {
            width,
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn vertices(&self) -> &BTreeSet<VertexLabel> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: VertexLabel, v: VertexLabel) -> bool {
        Edge::new(u, v).is_ok_and(|e| self.edges.contains(&e))
    }

    pub fn adjacency(&self) -> BTreeMap<VertexLabel, BTreeSet<VertexLabel>> {
        let mut adj: BTreeMap<_, BTreeSet<_>> =
            self.vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.lo()).expect("endpoint").insert(e.hi());
            adj.get_mut(&e.hi()).expect("endpoint").insert(e.lo());
        }
        adj
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degrees: Vec<usize> = self.adjacency().values().map(BTreeSet::len).collect();
        degrees.sort_unstable();
        degrees
    }

    /// Subgraph on the same vertex set with only `edges` kept.
    pub fn spanning_subgraph(&self, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        Graph::new(self.width, self.vertices.iter().copied(), edges)
    }

    /// Subgraph induced by `keep`.
    pub fn induced(&self, keep: &BTreeSet<VertexLabel>) -> Self {
        Graph {
            width: self.width,
            vertices: self.vertices.intersection(keep).copied().collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| keep.contains(&e.lo()) && keep.contains(&e.hi()))
                .copied()
                .collect(),
        }
    }

    /// Components ordered by their smallest vertex label. Isolated vertices
    /// form single-vertex components.
    pub fn connected_components(&self) -> Vec<Graph> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.vertices {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[&v] {
                    if seen.insert(w) {
                        comp.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(self.induced(&comp));
        }
        out
    }

    /// Canonical text form: `graph width=<d>` followed by sorted edge lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("graph width={}\n", self.width);
        for e in &self.edges {
            s.push_str(&format!("{e}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (n, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `graph width=<d>` header"))?;
        let width = parse_header_field(n, header, "graph", "width")?;
        let mut edges = BTreeSet::new();
        for (n, line) in lines {
            let e = parse_edge_line(n, line, width)?;
            if !edges.insert(e) {
                return Err(Error::parse(n, format!("duplicate edge {e}")));
            }
        }
        Graph::from_edges(width, edges)
    }
}

/// `d`-dimensional hypercube on all width-`d` labels.
pub fn hypercube(d: usize) -> Result<Graph> {
    if !(1..=MAX_CUBE_DIMENSION).contains(&d) {
        return Err(Error::domain(format!(
            "hypercube dimension {d} outside 1..={MAX_CUBE_DIMENSION}"
        )));
    }
    let vertices: Vec<_> = VertexLabel::all(d).collect();
    let edges = vertices.iter().flat_map(|&v| {
        (1..=d)
            .map(move |p| v.flip(p))
            .filter(move |&w| v < w)
            .map(move |w| Edge::new(v, w).expect("distinct labels"))
    });
    let edges: Vec<_> = edges.collect();
    Graph::new(d, vertices, edges)
}

/// Complete graph on the first `n` labels of the smallest width that fits.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if !(1..=1 << MAX_CUBE_DIMENSION).contains(&n) {
        return Err(Error::domain(format!("complete graph order {n} outside 1..=2^{MAX_CUBE_DIMENSION}")));
    }
    let width = (usize::BITS - (n - 1).leading_zeros()).max(1) as usize;
    let vertices: Vec<_> = VertexLabel::all(width).take(n).collect();
    let mut edges = Vec::new();
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            edges.push(Edge::new(u, v)?);
        }
    }
    Graph::new(width, vertices, edges)
}

/// Non-empty, non-comment lines with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `<keyword> ... <field>=<value> ...` and returns the integer value.
pub(crate) fn parse_header_field(
    line_no: usize,
    line: &str,
    keyword: &str,
    field: &str,
) -> Result<usize> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(keyword) {
        return Err(Error::parse(line_no, format!("expected `{keyword}` header")));
    }
    header_value(line_no, line, field)
}

pub(crate) fn header_value(line_no: usize, line: &str, field: &str) -> Result<usize> {
    let prefix = format!("{field}=");
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(prefix.as_str()))
        .ok_or_else(|| Error::parse(line_no, format!("missing `{field}=`")))?
        .parse()
        .map_err(|_| Error::parse(line_no, format!("`{field}` is not a nonnegative integer")))
}

pub(crate) fn parse_label(line_no: usize, token: &str, width: usize) -> Result<VertexLabel> {
    let v: VertexLabel = token
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad label `{token}`")))?;
    if v.width() != width {
        return Err(Error::parse(
            line_no,
            format!("label `{token}` is not width {width}"),
        ));
    }
    Ok(v)
}

pub(crate) fn parse_edge_line(line_no: usize, line: &str, width: usize) -> Result<Edge> {
    let tokens: Vec<_> = line.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(Error::parse(line_no, "expected two labels"));
    }
    let u = parse_label(line_no, tokens[0], width)?;
    let v = parse_label(line_no, tokens[1], width)?;
    Edge::new(u, v).map_err(|e| Error::parse(line_no, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::label;

    #[test]
    fn small_cubes() {
        let q1 = hypercube(1).unwrap();
        assert_eq!((q1.vertex_count(), q1.edge_count()), (2, 1));
        let q4 = hypercube(4).unwrap();
        assert_eq!((q4.vertex_count(), q4.edge_count()), (16, 32));
        let q8 = hypercube(8).unwrap();
        assert_eq!((q8.vertex_count(), q8.edge_count()), (256, 1024));
        assert!(hypercube(0).is_err());
        assert!(hypercube(17).is_err());
    }

    #[test]
    fn cube_edges_are_exactly_distance_one() {
        for d in 1..=10 {
            let q = hypercube(d).unwrap();
            assert_eq!(q.vertex_count(), 1 << d);
            assert_eq!(q.edge_count(), d << (d - 1));
            let verts: Vec<_> = q.vertices().iter().copied().collect();
            if d <= 6 {
                for (i, &u) in verts.iter().enumerate() {
                    for &v in &verts[i + 1..] {
                        let dist = u.hamming_distance(v).unwrap();
                        assert_eq!(q.has_edge(u, v), dist == 1);
                    }
                }
            } else {
                assert!(q
                    .edges()
                    .iter()
                    .all(|e| e.lo().hamming_distance(e.hi()).unwrap() == 1));
            }
        }
    }

    #[test]
    fn components() {
        assert!(Graph::empty(4).connected_components().is_empty());
        let q2 = hypercube(2).unwrap();
        assert_eq!(q2.connected_components(), vec![q2.clone()]);

        let e1 = Edge::new(label("0011"), label("0001")).unwrap();
        let e2 = Edge::new(label("1000"), label("1100")).unwrap();
        let g = Graph::new(4, [label("0000"), label("0011"), label("0001"), label("1000"), label("1100")], [e1, e2]).unwrap();
        let comps = g.connected_components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[0].vertex_count(), 1);
        assert_eq!(comps[1].edges().iter().next(), Some(&e1));
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(Edge::new(label("01"), label("01")).is_err());
        assert!(Edge::new(label("01"), label("011")).is_err());
        let e = Edge::new(label("00"), label("01")).unwrap();
        assert!(Graph::new(2, [label("00")], [e]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let q3 = hypercube(3).unwrap();
        let text = q3.to_text();
        assert!(text.starts_with("graph width=3\n000 001\n"));
        let back = Graph::from_text(&text).unwrap();
        assert_eq!(back, q3);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let err = Graph::from_text("graph width=3\n# ok\n000 0012\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = Graph::from_text("graph width=3\n000 001\n001 000\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(Graph::from_text("drawing width=3\n").is_err());
    }

    #[test]
    fn complete_graphs() {
        for n in 1..=9 {
            let g = complete_graph(n).unwrap();
            assert_eq!(g.vertex_count(), n);
            assert_eq!(g.edge_count(), n * (n - 1) / 2);
            assert!(g.degree_sequence().iter().all(|&d| d == n - 1));
        }
        assert_eq!(complete_graph(5).unwrap().width(), 3);
        assert!(complete_graph(0).is_err());
    }
}
