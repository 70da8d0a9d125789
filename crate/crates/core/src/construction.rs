//! The two-plane partition of `Q_8` built from depleted 5-cubes.
//!
//! Labels of `Q_8` are written `prefix-suffix` with two width-4 halves. The
//! prefixes are split into `C1` and `C2`; each class is paired up by
//! flipping the first digit, and every pair spans one depleted 5-cube whose
//! vertex set is the 32 labels with a prefix from the pair. A depleted
//! n-cube here is a spanning subgraph of `Q_n` after relabeling: the tables
//! below only pick which hypercube edges survive.
//!
//! Plane 1 takes the edges of all eight depleted cubes. Plane 2 is the image
//! of plane 1 under the prefix/suffix swap, and turns out to be exactly the
//! complement of plane 1 in `E(Q_8)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{hypercube, Edge, Graph};
use crate::iso::{verify_isomorphism, VertexMap};
use crate::label::{label, VertexLabel};
use crate::partition::EdgePartition;
use crate::report::VerificationReport;

pub const HALF_WIDTH: usize = 4;
pub const FULL_WIDTH: usize = 8;

const C1: [&str; 8] = ["0000", "1000", "0010", "1010", "0011", "1011", "0001", "1001"];
const C2: [&str; 8] = ["0111", "1111", "0101", "1101", "0100", "1100", "0110", "1110"];

const P1: [(&str, &str); 4] = [
    ("0000", "1000"),
    ("0010", "1010"),
    ("0011", "1011"),
    ("0001", "1001"),
];
const P2: [(&str, &str); 4] = [
    ("0111", "1111"),
    ("0101", "1101"),
    ("0100", "1100"),
    ("0110", "1110"),
];

/// Suffix pairs shared by both cube types. `b` ranges over {0, 1} and the
/// prefix over both members of the pair: three 3-cubes' worth of edges per
/// (prefix, b), 48 edges in all.
const CUBE_ROWS: [[(&str, &str); 4]; 3] = [
    [("b000", "b001"), ("b000", "b100"), ("b100", "b101"), ("b001", "b101")],
    [("b010", "b011"), ("b010", "b110"), ("b110", "b111"), ("b011", "b111")],
    [("b000", "b010"), ("b001", "b011"), ("b100", "b110"), ("b101", "b111")],
];

/// Rungs inside one prefix, flipping the first suffix digit: 4 edges per
/// prefix. The first set joins suffixes over `P2` pairs, the second over
/// `P1` pairs.
///
/// The set is chosen by the prefix's third digit (0: first set, 1: second).
/// For the first-listed pair of each class that is the set tabulated for its
/// type. Choosing by type alone, the rungs of the pairs (0010, 1010),
/// (0011, 1011), (0101, 1101) and (0100, 1100) collide with swap images of
/// bridges, and plane 2 would not be the complement of plane 1.
const RUNGS_OVER_P2: [(&str, &str); 4] = [
    ("0101", "1101"),
    ("0111", "1111"),
    ("0110", "1110"),
    ("0100", "1100"),
];
const RUNGS_OVER_P1: [(&str, &str); 4] = [
    ("0011", "1011"),
    ("0001", "1001"),
    ("0000", "1000"),
    ("0010", "1010"),
];

/// Suffixes whose two pair-prefixed copies are joined: 8 edges.
const TYPE1_BRIDGES: [&str; 8] = ["0000", "0100", "1100", "1000", "1001", "1101", "0101", "0001"];
const TYPE2_BRIDGES: [&str; 8] = ["0110", "0111", "0011", "1011", "1111", "1110", "1010", "0010"];

fn rungs_for(prefix: VertexLabel) -> &'static [(&'static str, &'static str); 4] {
    if prefix.digit(3) == 0 {
        &RUNGS_OVER_P2
    } else {
        &RUNGS_OVER_P1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CubeType {
    Type1,
    Type2,
}

/// Two width-4 prefixes differing in their first digit.
pub type PrefixPair = (VertexLabel, VertexLabel);

/// The four prefix pairs of one class, in listed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    pairs: Vec<PrefixPair>,
}

impl PairSet {
    fn from_literals(literals: &[(&str, &str)]) -> Self {
        PairSet {
            pairs: literals.iter().map(|&(a, b)| (label(a), label(b))).collect(),
        }
    }

    pub fn pairs(&self) -> &[PrefixPair] {
        &self.pairs
    }

    pub fn contains(&self, pair: PrefixPair) -> bool {
        self.pairs.contains(&pair)
    }

    /// All labels appearing in some pair.
    pub fn labels(&self) -> BTreeSet<VertexLabel> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

/// Identifies one depleted 5-cube: its type and the prefix pair it lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DepletedCubeSpec {
    cube_type: CubeType,
    pair: PrefixPair,
}

impl DepletedCubeSpec {
    pub fn new(cube_type: CubeType, pair: PrefixPair) -> Result<Self> {
        let (p1, p2) = pair_sets();
        let allowed = match cube_type {
            CubeType::Type1 => &p1,
            CubeType::Type2 => &p2,
        };
        if !allowed.contains(pair) {
            return Err(Error::domain(format!(
                "({}, {}) is not a {cube_type:?} pair",
                pair.0, pair.1
            )));
        }
        Ok(DepletedCubeSpec { cube_type, pair })
    }

    pub fn cube_type(&self) -> CubeType {
        self.cube_type
    }

    pub fn pair(&self) -> PrefixPair {
        self.pair
    }

    /// All eight cubes, Type 1 first, each in listed pair order.
    pub fn all() -> Vec<DepletedCubeSpec> {
        let (p1, p2) = pair_sets();
        let type1 = p1.pairs.into_iter().map(|pair| DepletedCubeSpec {
            cube_type: CubeType::Type1,
            pair,
        });
        let type2 = p2.pairs.into_iter().map(|pair| DepletedCubeSpec {
            cube_type: CubeType::Type2,
            pair,
        });
        type1.chain(type2).collect()
    }
}

/// The prefix classes `(C1, C2)`.
pub fn c1_c2_sets() -> (BTreeSet<VertexLabel>, BTreeSet<VertexLabel>) {
    (
        C1.iter().map(|s| label(s)).collect(),
        C2.iter().map(|s| label(s)).collect(),
    )
}

/// The pair sets `(P1, P2)` in listed order.
pub fn pair_sets() -> (PairSet, PairSet) {
    (PairSet::from_literals(&P1), PairSet::from_literals(&P2))
}

fn join(prefix: VertexLabel, suffix: &str) -> VertexLabel {
    prefix.concat(label(suffix)).expect("width 8")
}

fn edge(u: VertexLabel, v: VertexLabel) -> Edge {
    Edge::new(u, v).expect("table edge joins distinct labels")
}

fn with_b(pattern: &str, b: char) -> String {
    pattern.replacen('b', &b.to_string(), 1)
}

/// Expands the edge table of one depleted 5-cube: 64 edges on 32 vertices.
pub fn depleted_cube(spec: DepletedCubeSpec) -> Result<Graph> {
    let spec = DepletedCubeSpec::new(spec.cube_type, spec.pair)?;
    let (first, second) = spec.pair;
    let bridges = match spec.cube_type {
        CubeType::Type1 => &TYPE1_BRIDGES,
        CubeType::Type2 => &TYPE2_BRIDGES,
    };
    let mut edges = BTreeSet::new();
    for prefix in [first, second] {
        for row in &CUBE_ROWS {
            for b in ['0', '1'] {
                for &(s, t) in row {
                    edges.insert(edge(join(prefix, &with_b(s, b)), join(prefix, &with_b(t, b))));
                }
            }
        }
        for &(s, t) in rungs_for(prefix) {
            edges.insert(edge(join(prefix, s), join(prefix, t)));
        }
    }
    for &s in bridges {
        edges.insert(edge(join(first, s), join(second, s)));
    }
    let g = Graph::from_edges(FULL_WIDTH, edges)?;
    if g.edge_count() != 64 || g.vertex_count() != 32 {
        return Err(Error::Construction(format!(
            "depleted cube {spec:?} expanded to {} vertices and {} edges",
            g.vertex_count(),
            g.edge_count()
        )));
    }
    Ok(g)
}

/// Swaps the width-4 prefix and suffix of a width-8 label.
pub fn sigma(v: VertexLabel) -> Result<VertexLabel> {
    if v.width() != FULL_WIDTH {
        return Err(Error::domain(format!("sigma needs width 8, got {}", v.width())));
    }
    let (prefix, suffix) = v.split(HALF_WIDTH)?;
    suffix.concat(prefix)
}

/// [`sigma`] as a vertex map on all of `V(Q_8)`.
pub fn sigma_map() -> VertexMap {
    VertexMap::from_fn(VertexLabel::all(FULL_WIDTH), |v| sigma(v).expect("width 8"))
        .expect("sigma is a bijection")
}

/// Applies [`sigma`] to both endpoints of a `Q_8` edge.
pub fn rho(e: Edge) -> Result<Edge> {
    if e.lo().width() != FULL_WIDTH || e.lo().hamming_distance(e.hi())? != 1 {
        return Err(Error::domain(format!("{e:?} is not an edge of Q_8")));
    }
    Edge::new(sigma(e.lo())?, sigma(e.hi())?)
}

/// Union of the eight depleted cubes: the 512 edges of plane 1.
pub fn plane1_edges() -> BTreeSet<Edge> {
    DepletedCubeSpec::all()
        .into_iter()
        .flat_map(|spec| {
            depleted_cube(spec)
                .expect("listed specs are valid")
                .edges()
                .clone()
        })
        .collect()
}

/// Plane 1 from the depleted cubes, plane 2 its image under [`rho`].
pub fn build_biplanar_partition() -> Result<EdgePartition> {
    let host = hypercube(FULL_WIDTH)?;
    let plane1 = plane1_edges();
    let plane2 = plane1.iter().map(|&e| rho(e)).collect::<Result<BTreeSet<_>>>()?;
    EdgePartition::new(host, vec![plane1, plane2]).map_err(|e| Error::Construction(e.to_string()))
}

/// Reconstruction of the earlier 256-crossing split: plane 1 holds the edges
/// that flip a prefix digit (one `Q_4` per fixed suffix), plane 2 those that
/// flip a suffix digit (one `Q_4` per fixed prefix).
pub fn baseline_partition() -> Result<EdgePartition> {
    let host = hypercube(FULL_WIDTH)?;
    let (prefix_edges, suffix_edges): (BTreeSet<Edge>, BTreeSet<Edge>) =
        host.edges().iter().partition(|e| changed_position(**e) <= HALF_WIDTH);
    EdgePartition::new(host, vec![prefix_edges, suffix_edges])
}

fn changed_position(e: Edge) -> usize {
    (1..=e.lo().width())
        .find(|&p| e.lo().digit(p) != e.hi().digit(p))
        .expect("distinct endpoints")
}

/// Checks a two-plane partition of `Q_8` against every structural property
/// of the depleted-cube construction. Failures are recorded, never thrown.
pub fn verify_construction(p: &EdgePartition) -> VerificationReport {
    let mut report = VerificationReport::new();
    let q8 = hypercube(FULL_WIDTH).expect("Q_8");

    let host_ok = p.host().width() == FULL_WIDTH
        && p.host().vertex_count() == q8.vertex_count()
        && p.host().edges().is_subset(q8.edges());
    report.record(
        "host",
        host_ok,
        format!(
            "width {}, {} vertices, {} edges",
            p.host().width(),
            p.host().vertex_count(),
            p.host().edge_count()
        ),
    );

    let sizes: Vec<usize> = p.parts().iter().map(BTreeSet::len).collect();
    report.record(
        "part-sizes",
        sizes == [512, 512],
        format!("sizes {sizes:?}, expected [512, 512]"),
    );
    if p.k() != 2 || !host_ok {
        report.record("two-planes", false, format!("need 2 planes over Q_8, got k={}", p.k()));
        return report;
    }
    let (part1, part2) = (&p.parts()[0], &p.parts()[1]);

    let shared = part1.intersection(part2).count();
    report.record(
        "disjoint",
        shared == 0,
        format!("{shared} edges in both planes"),
    );
    let union: BTreeSet<Edge> = part1.union(part2).copied().collect();
    let missing = q8.edges().difference(&union).count();
    let foreign = union.difference(q8.edges()).count();
    report.record(
        "complete",
        missing == 0 && foreign == 0,
        format!(
            "union has {} edges; {missing} Q_8 edges missing, {foreign} non-Q_8 edges",
            union.len()
        ),
    );

    let cubes: Vec<BTreeSet<Edge>> = DepletedCubeSpec::all()
        .into_iter()
        .map(|s| depleted_cube(s).expect("valid spec").edges().clone())
        .collect();
    let images: Vec<BTreeSet<Edge>> = cubes
        .iter()
        .map(|c| c.iter().map(|&e| rho(e).expect("Q_8 edge")).collect())
        .collect();
    for (name, part, expected) in [
        ("plane1-components", part1, &cubes),
        ("plane2-components", part2, &images),
    ] {
        let (ok, detail) = components_match(&q8, part, expected);
        report.record(name, ok, detail);
    }

    let rho_image = |part: &BTreeSet<Edge>| -> BTreeSet<Edge> {
        part.iter().filter_map(|&e| rho(e).ok()).collect()
    };
    let forward = rho_image(part1) == *part2;
    let backward = rho_image(part2) == *part1;
    report.record(
        "rho-swaps-planes",
        forward && backward,
        format!("rho(plane1)=plane2: {forward}, rho(plane2)=plane1: {backward}"),
    );

    let g1 = p.plane_graph(0).expect("plane 1");
    let g2 = p.plane_graph(1).expect("plane 2");
    report.record(
        "sigma-isomorphism",
        verify_isomorphism(&g1, &g2, &sigma_map()),
        "sigma maps G1 adjacency-preservingly onto G2",
    );

    let bad = union
        .iter()
        .filter(|e| e.lo().hamming_distance(e.hi()).map_or(true, |d| d != 1))
        .count();
    report.record(
        "hamming-one",
        bad == 0,
        format!("{bad} edges with Hamming distance other than 1"),
    );
    report
}

/// `part` viewed as a graph on its own endpoints must split into exactly the
/// expected edge sets, each a 32-vertex, 64-edge component.
fn components_match(q8: &Graph, part: &BTreeSet<Edge>, expected: &[BTreeSet<Edge>]) -> (bool, String) {
    let g = match q8.spanning_subgraph(part.iter().copied()) {
        Ok(g) => g,
        Err(e) => return (false, e.to_string()),
    };
    let comps: Vec<Graph> = g
        .connected_components()
        .into_iter()
        .filter(|c| c.edge_count() > 0)
        .collect();
    let shapes: BTreeMap<(usize, usize), usize> = comps.iter().fold(BTreeMap::new(), |mut m, c| {
        *m.entry((c.vertex_count(), c.edge_count())).or_default() += 1;
        m
    });
    let found: BTreeSet<&BTreeSet<Edge>> = comps.iter().map(Graph::edges).collect();
    let wanted: BTreeSet<&BTreeSet<Edge>> = expected.iter().collect();
    let ok = comps.len() == 8
        && comps.iter().all(|c| c.vertex_count() == 32 && c.edge_count() == 64)
        && found == wanted;
    let shape_text: Vec<String> = shapes
        .iter()
        .map(|((v, e), n)| format!("{n}x({v}v,{e}e)"))
        .collect();
    (
        ok,
        format!(
            "{} components [{}]; depleted-cube edge sets matched: {}",
            comps.len(),
            shape_text.join(", "),
            found == wanted
        ),
    )
}
