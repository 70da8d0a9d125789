//! Vertex relabelings and small-graph isomorphism by backtracking.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::label::VertexLabel;

/// A relabeling of vertices. Used both for permutations such as the
/// prefix/suffix swap and for isomorphism witnesses between two graphs.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VertexMap {
    mapping: BTreeMap<VertexLabel, VertexLabel>,
}

impl VertexMap {
    pub fn new(mapping: BTreeMap<VertexLabel, VertexLabel>) -> Result<Self> {
        let image: BTreeSet<_> = mapping.values().collect();
        if image.len() != mapping.len() {
            return Err(Error::domain("vertex map is not injective"));
        }
        Ok(VertexMap { mapping })
    }

    pub fn identity(vertices: impl IntoIterator<Item = VertexLabel>) -> Self {
        VertexMap {
            mapping: vertices.into_iter().map(|v| (v, v)).collect(),
        }
    }

    /// Map obtained by applying `f` to each vertex of `domain`.
    pub fn from_fn(
        domain: impl IntoIterator<Item = VertexLabel>,
        f: impl Fn(VertexLabel) -> VertexLabel,
    ) -> Result<Self> {
        VertexMap::new(domain.into_iter().map(|v| (v, f(v))).collect())
    }

    pub fn get(&self, v: VertexLabel) -> Option<VertexLabel> {
        self.mapping.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexLabel, VertexLabel)> + '_ {
        self.mapping.iter().map(|(&a, &b)| (a, b))
    }

    pub fn map_edge(&self, e: Edge) -> Result<Edge> {
        let u = self.get(e.lo()).ok_or_else(|| missing(e.lo()))?;
        let v = self.get(e.hi()).ok_or_else(|| missing(e.hi()))?;
        Edge::new(u, v)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &VertexMap) -> Result<VertexMap> {
        let mapping = self
            .mapping
            .iter()
            .map(|(&a, &b)| other.get(b).map(|c| (a, c)).ok_or_else(|| missing(b)))
            .collect::<Result<_>>()?;
        VertexMap::new(mapping)
    }
}

fn missing(v: VertexLabel) -> Error {
    Error::domain(format!("vertex map undefined at {v}"))
}

/// Relabels `g` through `m`. Fails if `m` is not defined on every vertex of `g`.
pub fn apply_vertex_map(g: &Graph, m: &VertexMap) -> Result<Graph> {
    let vertices = g
        .vertices()
        .iter()
        .map(|&v| m.get(v).ok_or_else(|| missing(v)))
        .collect::<Result<Vec<_>>>()?;
    let width = vertices.first().map_or(g.width(), |v| v.width());
    let edges = g
        .edges()
        .iter()
        .map(|&e| m.map_edge(e))
        .collect::<Result<Vec<_>>>()?;
    Graph::new(width, vertices, edges)
}

/// Checks that `m` is a bijection `V(g) → V(h)` sending edges to edges and
/// non-edges to non-edges.
pub fn verify_isomorphism(g: &Graph, h: &Graph, m: &VertexMap) -> bool {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    if m.len() != g.vertex_count() {
        return false;
    }
    let mut image = BTreeSet::new();
    for &v in g.vertices() {
        match m.get(v) {
            Some(w) if h.vertices().contains(&w) && image.insert(w) => {}
            _ => return false,
        }
    }
    // Equal edge counts plus every edge landing on an edge rules out any
    // non-edge mapping onto an edge.
    g.edges()
        .iter()
        .all(|&e| m.map_edge(e).is_ok_and(|f| h.edges().contains(&f)))
}

/// Finds an isomorphism witness from `g` to `h`, if one exists.
///
/// Backtracking over vertices of `g` in connectivity order, restricted to
/// candidates with an equal distance profile (count of vertices at each BFS
/// distance, unreachable vertices included). Every returned witness has
/// passed [`verify_isomorphism`].
pub fn are_isomorphic(g: &Graph, h: &Graph) -> Option<VertexMap> {
    if g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || g.degree_sequence() != h.degree_sequence()
    {
        return None;
    }
    let a = Indexed::new(g);
    let b = Indexed::new(h);
    let mut classes_a = a.profiles.clone();
    let mut classes_b = b.profiles.clone();
    classes_a.sort();
    classes_b.sort();
    if classes_a != classes_b {
        return None;
    }

    let order = a.search_order();
    let n = a.n;
    let mut state = Matcher {
        a: &a,
        b: &b,
        order: &order,
        forward: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if !state.extend(0) {
        return None;
    }
    let mapping = (0..n)
        .map(|i| (a.labels[i], b.labels[state.forward[i]]))
        .collect();
    let witness = VertexMap::new(mapping).ok()?;
    verify_isomorphism(g, h, &witness).then_some(witness)
}

struct Indexed {
    n: usize,
    labels: Vec<VertexLabel>,
    neighbors: Vec<Vec<usize>>,
    rows: Vec<Vec<u64>>,
    profiles: Vec<Vec<usize>>,
}

impl Indexed {
    fn new(g: &Graph) -> Self {
        let labels: Vec<_> = g.vertices().iter().copied().collect();
        let index: BTreeMap<_, _> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = labels.len();
        let words = n.div_ceil(64).max(1);
        let mut neighbors = vec![Vec::new(); n];
        let mut rows = vec![vec![0u64; words]; n];
        for e in g.edges() {
            let (i, j) = (index[&e.lo()], index[&e.hi()]);
            neighbors[i].push(j);
            neighbors[j].push(i);
            rows[i][j / 64] |= 1 << (j % 64);
            rows[j][i / 64] |= 1 << (i % 64);
        }
        let profiles = (0..n).map(|s| distance_profile(&neighbors, s)).collect();
        Indexed {
            n,
            labels,
            neighbors,
            rows,
            profiles,
        }
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    /// Vertices ordered so each one (after the first of its component) has
    /// as many already-placed neighbors as possible.
    fn search_order(&self) -> Vec<usize> {
        let mut class_size: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
        for p in &self.profiles {
            *class_size.entry(p).or_default() += 1;
        }
        let rarity: Vec<usize> = self.profiles.iter().map(|p| class_size[p]).collect();
        let mut placed = vec![false; self.n];
        let mut links = vec![0usize; self.n];
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let next = (0..self.n)
                .filter(|&v| !placed[v])
                .min_by_key(|&v| (std::cmp::Reverse(links[v]), rarity[v], v))
                .expect("unplaced vertex");
            placed[next] = true;
            order.push(next);
            for &w in &self.neighbors[next] {
                links[w] += 1;
            }
        }
        order
    }
}

fn distance_profile(neighbors: &[Vec<usize>], source: usize) -> Vec<usize> {
    let n = neighbors.len();
    let mut dist = vec![usize::MAX; n];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    let mut profile = vec![0usize; 1];
    profile[0] = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &neighbors[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                if profile.len() <= dist[w] {
                    profile.push(0);
                }
                profile[dist[w]] += 1;
                queue.push_back(w);
            }
        }
    }
    let reached: usize = profile.iter().sum();
    profile.push(n - reached);
    profile
}

struct Matcher<'a> {
    a: &'a Indexed,
    b: &'a Indexed,
    order: &'a [usize],
    forward: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for w in 0..self.b.n {
            if self.used[w] || self.a.profiles[v] != self.b.profiles[w] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&u| {
                self.a.adjacent(v, u) == self.b.adjacent(w, self.forward[u])
            });
            if !consistent {
                continue;
            }
            self.forward[v] = w;
            self.used[w] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[w] = false;
            self.forward[v] = usize::MAX;
        }
        false
    }
}
