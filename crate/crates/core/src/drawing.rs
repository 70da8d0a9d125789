//! Integer-grid drawings with polyline edges: validation, exact crossing
//! counting, disjoint-union assembly, the text file format and SVG export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{collinear_overlap, on_open_segment, proper_cross, Param, Point};
use crate::graph::{content_lines, parse_header_field, parse_label, Edge, Graph};
use crate::iso::VertexMap;
use crate::label::VertexLabel;
use crate::report::VerificationReport;

/// Failures listed per check before the rest are summarized.
const MAX_LISTED: usize = 8;

/// A graph with a grid position per vertex and a bend list per edge.
///
/// An edge is drawn as the polyline from its smaller endpoint through its
/// bends to its larger endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Drawing {
    graph: Graph,
    position: BTreeMap<VertexLabel, Point>,
    route: BTreeMap<Edge, Vec<Point>>,
}

/// One straight piece of an edge's polyline.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Segment {
    pub edge: usize,
    pub a: Point,
    pub b: Point,
    lo: Point,
    hi: Point,
}

impl Segment {
    fn new(edge: usize, a: Point, b: Point) -> Self {
        Segment {
            edge,
            a,
            b,
            lo: Point {
                x: a.x.min(b.x),
                y: a.y.min(b.y),
            },
            hi: Point {
                x: a.x.max(b.x),
                y: a.y.max(b.y),
            },
        }
    }

    fn boxes_meet(&self, other: &Segment) -> bool {
        self.lo.x <= other.hi.x
            && other.lo.x <= self.hi.x
            && self.lo.y <= other.hi.y
            && other.lo.y <= self.hi.y
    }
}

/// Crossing total of a drawing with a per-edge-pair breakdown.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossingCount {
    pub total: u64,
    /// Edge pairs that cross at least once, in edge order.
    pub per_pair: Vec<(Edge, Edge, u64)>,
    /// Adjacent edges that cross, and edge pairs crossing more than once.
    pub goodness_warnings: Vec<String>,
}

impl Drawing {
    pub fn new(
        graph: Graph,
        position: BTreeMap<VertexLabel, Point>,
        route: BTreeMap<Edge, Vec<Point>>,
    ) -> Result<Self> {
        let d = Drawing {
            graph,
            position,
            route,
        };
        d.check_structure()?;
        Ok(d)
    }

    /// Straight-line drawing: no bends on any edge.
    pub fn straight(graph: Graph, position: BTreeMap<VertexLabel, Point>) -> Result<Self> {
        let route = graph.edges().iter().map(|&e| (e, Vec::new())).collect();
        Drawing::new(graph, position, route)
    }

    fn check_structure(&self) -> Result<()> {
        for v in self.graph.vertices() {
            if !self.position.contains_key(v) {
                return Err(Error::domain(format!("vertex {v} has no position")));
            }
        }
        if self.position.len() != self.graph.vertex_count() {
            return Err(Error::domain("position given for a vertex outside the graph"));
        }
        let mut taken = BTreeMap::new();
        for (v, p) in &self.position {
            if !p.in_range() {
                return Err(Error::domain(format!("vertex {v} at {p} is out of range")));
            }
            if let Some(w) = taken.insert(*p, *v) {
                return Err(Error::domain(format!("vertices {w} and {v} share position {p}")));
            }
        }
        if self.route.len() != self.graph.edge_count()
            || self.graph.edges().iter().any(|e| !self.route.contains_key(e))
        {
            return Err(Error::domain("routes must be given for exactly the graph's edges"));
        }
        for e in self.graph.edges() {
            let line = self.polyline(*e);
            if let Some(p) = line.iter().find(|p| !p.in_range()) {
                return Err(Error::domain(format!("edge {e:?} bend {p} is out of range")));
            }
            if line.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::domain(format!("edge {e:?} repeats a consecutive point")));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn positions(&self) -> &BTreeMap<VertexLabel, Point> {
        &self.position
    }

    pub fn position(&self, v: VertexLabel) -> Option<Point> {
        self.position.get(&v).copied()
    }

    pub fn routes(&self) -> &BTreeMap<Edge, Vec<Point>> {
        &self.route
    }

    pub fn bends(&self, e: Edge) -> &[Point] {
        self.route.get(&e).map_or(&[], Vec::as_slice)
    }

    pub fn bend_count(&self) -> usize {
        self.route.values().map(Vec::len).sum()
    }

    /// Full polyline of `e`: smaller endpoint, bends, larger endpoint.
    pub fn polyline(&self, e: Edge) -> Vec<Point> {
        let mut line = vec![self.position[&e.lo()]];
        line.extend_from_slice(self.bends(e));
        line.push(self.position[&e.hi()]);
        line
    }

    pub(crate) fn segments(&self) -> (Vec<Edge>, Vec<Segment>) {
        let edges: Vec<Edge> = self.graph.edges().iter().copied().collect();
        let mut segs = Vec::new();
        for (i, &e) in edges.iter().enumerate() {
            for w in self.polyline(e).windows(2) {
                segs.push(Segment::new(i, w[0], w[1]));
            }
        }
        (edges, segs)
    }

    /// Inclusive bounding box `(min, max)` over vertices and bends.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let mut pts = self
            .position
            .values()
            .chain(self.route.values().flatten())
            .copied();
        let first = pts.next()?;
        Some(pts.fold((first, first), |(lo, hi), p| {
            (
                Point {
                    x: lo.x.min(p.x),
                    y: lo.y.min(p.y),
                },
                Point {
                    x: hi.x.max(p.x),
                    y: hi.y.max(p.y),
                },
            )
        }))
    }

    /// Applies `f` to every vertex position and bend point.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<Drawing> {
        Drawing::new(
            self.graph.clone(),
            self.position.iter().map(|(&v, &p)| (v, f(p))).collect(),
            self.route
                .iter()
                .map(|(&e, bends)| (e, bends.iter().map(|&p| f(p)).collect()))
                .collect(),
        )
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Result<Drawing> {
        self.map_points(|p| p.translate(dx, dy))
    }

    /// Same geometry under new vertex names. Bend lists are reversed when
    /// the relabeling flips which endpoint of an edge is smaller.
    pub fn relabel(&self, m: &VertexMap) -> Result<Drawing> {
        let graph = crate::iso::apply_vertex_map(&self.graph, m)?;
        let position = self
            .position
            .iter()
            .map(|(&v, &p)| (m.get(v).expect("total on graph"), p))
            .collect();
        let mut route = BTreeMap::new();
        for (&e, bends) in &self.route {
            let image = m.map_edge(e)?;
            let mut bends = bends.clone();
            if image.lo() != m.get(e.lo()).expect("total on graph") {
                bends.reverse();
            }
            route.insert(image, bends);
        }
        Drawing::new(graph, position, route)
    }

    /// The drawing with `e` and its route removed; vertices stay.
    pub fn without_edge(&self, e: Edge) -> Result<Drawing> {
        let graph = self
            .graph
            .spanning_subgraph(self.graph.edges().iter().copied().filter(|&f| f != e))?;
        let mut route = self.route.clone();
        route.remove(&e);
        Drawing::new(graph, self.position.clone(), route)
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        let mut s = format!("drawing width={}\n", self.graph.width());
        for (v, p) in &self.position {
            let _ = writeln!(s, "v {v} {} {}", p.x, p.y);
        }
        for (e, bends) in &self.route {
            let _ = write!(s, "e {} {}", e.lo(), e.hi());
            for p in bends {
                let _ = write!(s, " {} {}", p.x, p.y);
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (n, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `drawing width=<d>` header"))?;
        let width = parse_header_field(n, header, "drawing", "width")?;
        let mut position = BTreeMap::new();
        let mut route = BTreeMap::new();
        for (n, line) in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "v" => {
                    if tokens.len() != 4 {
                        return Err(Error::parse(n, "expected `v <label> <x> <y>`"));
                    }
                    let v = parse_label(n, tokens[1], width)?;
                    let p = parse_point(n, tokens[2], tokens[3])?;
                    if position.insert(v, p).is_some() {
                        return Err(Error::parse(n, format!("duplicate vertex line for {v}")));
                    }
                }
                "e" => {
                    if tokens.len() < 3 || tokens.len().is_multiple_of(2) {
                        return Err(Error::parse(n, "expected `e <label> <label> [<x> <y>]*`"));
                    }
                    let u = parse_label(n, tokens[1], width)?;
                    let w = parse_label(n, tokens[2], width)?;
                    for v in [u, w] {
                        if !position.contains_key(&v) {
                            return Err(Error::parse(n, format!("edge uses unknown vertex {v}")));
                        }
                    }
                    let e = Edge::new(u, w).map_err(|err| Error::parse(n, err.to_string()))?;
                    let mut bends = tokens[3..]
                        .chunks(2)
                        .map(|c| parse_point(n, c[0], c[1]))
                        .collect::<Result<Vec<_>>>()?;
                    if e.lo() != u {
                        bends.reverse();
                    }
                    if route.insert(e, bends).is_some() {
                        return Err(Error::parse(n, format!("duplicate edge {e}")));
                    }
                }
                other => return Err(Error::parse(n, format!("unknown line kind `{other}`"))),
            }
        }
        let graph = Graph::new(width, position.keys().copied(), route.keys().copied())?;
        Drawing::new(graph, position, route)
    }
}

fn parse_point(line: usize, x: &str, y: &str) -> Result<Point> {
    let coord = |t: &str| {
        t.parse::<i64>()
            .map_err(|_| Error::parse(line, format!("bad coordinate `{t}`")))
    };
    Point::new(coord(x)?, coord(y)?).map_err(|e| Error::parse(line, e.to_string()))
}

/// Checks that the drawing is in general position: no vertex or bend inside
/// a segment, no shared bend points, no collinear overlaps and no point
/// interior to three or more segments.
pub fn validate_general_position(d: &Drawing) -> VerificationReport {
    let (edges, segs) = d.segments();
    let mut report = VerificationReport::new();

    let mut on_segment = Vec::new();
    for (&v, &p) in d.positions() {
        for s in &segs {
            if on_open_segment(p, s.a, s.b) {
                on_segment.push(format!("vertex {v} at {p} lies on edge {:?}", edges[s.edge]));
            }
        }
    }
    for (&e, bends) in d.routes() {
        for &p in bends {
            for s in &segs {
                if on_open_segment(p, s.a, s.b) {
                    on_segment.push(format!(
                        "bend {p} of edge {e:?} lies on edge {:?}",
                        edges[s.edge]
                    ));
                }
            }
        }
    }
    record(&mut report, "points-off-segments", on_segment);

    let mut owners: BTreeMap<Point, Vec<String>> = BTreeMap::new();
    for (&v, &p) in d.positions() {
        owners.entry(p).or_default().push(format!("vertex {v}"));
    }
    for (&e, bends) in d.routes() {
        for &p in bends {
            owners.entry(p).or_default().push(format!("bend of {e:?}"));
        }
    }
    let shared: Vec<String> = owners
        .iter()
        .filter(|(_, who)| who.len() > 1)
        .map(|(p, who)| format!("{p} is used by {}", who.join(", ")))
        .collect();
    record(&mut report, "distinct-points", shared);

    let overlaps = crossing_sweep(&segs, |i, j| {
        collinear_overlap(segs[i].a, segs[i].b, segs[j].a, segs[j].b).then(|| {
            format!(
                "{:?} and {:?} overlap along {}-{}",
                edges[segs[i].edge], edges[segs[j].edge], segs[j].a, segs[j].b
            )
        })
    });
    record(&mut report, "no-collinear-overlap", overlaps);

    let concurrent: Vec<String> = (0..segs.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let s = segs[i];
            let mut hits: Vec<(Param, usize)> = segs
                .iter()
                .enumerate()
                .filter(|&(j, t)| j != i && s.boxes_meet(t) && proper_cross(s.a, s.b, t.a, t.b))
                .map(|(j, t)| (Param::along(s.a, s.b, t.a, t.b), j))
                .collect();
            hits.sort();
            hits.windows(2)
                .filter(|w| w[0].0 == w[1].0 && i < w[0].1.min(w[1].1))
                .map(|w| {
                    format!(
                        "{:?}, {:?} and {:?} meet at one interior point on {}-{}",
                        edges[s.edge], edges[segs[w[0].1].edge], edges[segs[w[1].1].edge], s.a, s.b
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect();
    record(&mut report, "no-concurrent-crossings", concurrent);
    report
}

fn record(report: &mut VerificationReport, name: &str, failures: Vec<String>) {
    let detail = if failures.is_empty() {
        "ok".to_string()
    } else {
        let mut listed: Vec<String> = failures.iter().take(MAX_LISTED).cloned().collect();
        if failures.len() > MAX_LISTED {
            listed.push(format!("... {} more", failures.len() - MAX_LISTED));
        }
        listed.join("; ")
    };
    report.record(name, failures.is_empty(), detail);
}

/// Runs `f` on every segment pair `i < j` whose boxes meet, in order.
fn crossing_sweep<T: Send>(
    segs: &[Segment],
    f: impl Fn(usize, usize) -> Option<T> + Sync,
) -> Vec<T> {
    (0..segs.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let f = &f;
            (i + 1..segs.len())
                .filter(move |&j| segs[i].boxes_meet(&segs[j]))
                .filter_map(move |j| f(i, j))
        })
        .collect()
}

/// Counts transversal crossings between segments of distinct edges.
///
/// The drawing must pass [`validate_general_position`]. Crossings between
/// edges that share an endpoint still count and raise a goodness warning,
/// as does any edge pair crossing more than once.
pub fn count_crossings(d: &Drawing) -> Result<CrossingCount> {
    let report = validate_general_position(d);
    if !report.overall() {
        let first = report.failures().next().expect("a failure");
        return Err(Error::Degenerate(format!("{}: {}", first.name, first.detail)));
    }
    let (edges, segs) = d.segments();
    let hits = crossing_sweep(&segs, |i, j| {
        let (s, t) = (&segs[i], &segs[j]);
        (s.edge != t.edge && proper_cross(s.a, s.b, t.a, t.b)).then_some((s.edge.min(t.edge), s.edge.max(t.edge)))
    });
    let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for key in hits {
        *pairs.entry(key).or_default() += 1;
    }
    let mut count = CrossingCount::default();
    for (&(i, j), &n) in &pairs {
        let (e, f) = (edges[i], edges[j]);
        count.total += n;
        count.per_pair.push((e, f, n));
        if e.endpoints().iter().any(|&v| f.has_endpoint(v)) {
            count
                .goodness_warnings
                .push(format!("adjacent edges {e:?} and {f:?} cross {n} time(s)"));
        } else if n > 1 {
            count
                .goodness_warnings
                .push(format!("edges {e:?} and {f:?} cross {n} times"));
        }
    }
    Ok(count)
}

/// Places each drawing in its own horizontal band, stacked upward, with a
/// gap of twice the largest part extent between consecutive bands.
pub fn disjoint_union_layout(parts: &[Drawing]) -> Result<Drawing> {
    let mut seen = BTreeSet::new();
    for part in parts {
        for v in part.graph().vertices() {
            if !seen.insert(*v) {
                return Err(Error::domain(format!("vertex {v} appears in two parts")));
            }
        }
    }
    let width = parts.first().map_or(1, |p| p.graph().width());
    if parts.iter().any(|p| p.graph().width() != width) {
        return Err(Error::domain("parts use different label widths"));
    }
    let extent = parts
        .iter()
        .filter_map(Drawing::bounding_box)
        .map(|(lo, hi)| (hi.x - lo.x).max(hi.y - lo.y))
        .max()
        .unwrap_or(0)
        .max(1);
    let gap = 2 * extent;
    let mut position = BTreeMap::new();
    let mut route = BTreeMap::new();
    let mut edges = Vec::new();
    let mut base = 0i64;
    for part in parts {
        let Some((lo, hi)) = part.bounding_box() else {
            continue;
        };
        let moved = part.translate(-lo.x, base - lo.y)?;
        position.extend(moved.position);
        route.extend(moved.route);
        edges.extend(part.graph().edges().iter().copied());
        base += hi.y - lo.y + gap;
    }
    let graph = Graph::new(width, position.keys().copied(), edges)?;
    Drawing::new(graph, position, route)
}

/// Deterministic SVG 1.1 rendering: a circle and label per vertex, a
/// polyline per edge. The y axis points up as in the grid coordinates.
pub fn export_svg(d: &Drawing) -> String {
    let (lo, hi) = d.bounding_box().unwrap_or_default();
    let w = hi.x - lo.x;
    let h = hi.y - lo.y;
    let extent = w.max(h).max(1);
    let margin_x = ((w.max(1) * 5 + 99) / 100).max(1);
    let margin_y = ((h.max(1) * 5 + 99) / 100).max(1);
    let radius = extent as f64 / 120.0;
    let font = extent as f64 / 60.0;
    let flip = |p: Point| (p.x, hi.y + lo.y - p.y);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        lo.x - margin_x,
        lo.y - margin_y,
        w + 2 * margin_x,
        h + 2 * margin_y
    );
    let _ = writeln!(
        s,
        "<g fill=\"none\" stroke=\"black\" stroke-width=\"{:.3}\">",
        radius / 3.0
    );
    for e in d.graph().edges() {
        let pts: Vec<String> = d
            .polyline(*e)
            .into_iter()
            .map(|p| {
                let (x, y) = flip(p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(s, "<polyline points=\"{}\"/>", pts.join(" "));
    }
    s.push_str("</g>\n");
    let _ = writeln!(s, "<g fill=\"white\" stroke=\"black\" stroke-width=\"{:.3}\">", radius / 4.0);
    for p in d.positions().values() {
        let (x, y) = flip(*p);
        let _ = writeln!(s, "<circle cx=\"{x}\" cy=\"{y}\" r=\"{radius:.3}\"/>");
    }
    s.push_str("</g>\n");
    let _ = writeln!(s, "<g font-family=\"monospace\" font-size=\"{font:.3}\">");
    for (v, p) in d.positions() {
        let (x, y) = flip(*p);
        let _ = writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{:.3}\">{v}</text>",
            x as f64 + radius * 1.2,
            y as f64 - radius * 1.2
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}
