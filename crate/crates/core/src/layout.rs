//! Seeded simulated annealing over integer-grid polyline drawings.
//!
//! The engine keeps an edge-by-edge crossing matrix and re-evaluates only
//! the edges touched by a move. A move is rejected outright if it would
//! break general position (a point inside a segment, or three segments
//! through one interior point), so every state the search visits is a
//! drawing [`count_crossings`](crate::drawing::count_crossings) accepts.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::drawing::{validate_general_position, Drawing};
use crate::error::{Error, Result};
use crate::geometry::{on_open_segment, proper_cross, Param, Point};
use crate::graph::{Edge, Graph};
use crate::label::VertexLabel;

/// Restarts evaluated together before the early-stop check. Fixed so that
/// results do not depend on the machine's thread count.
const RESTART_BATCH: usize = 4;

/// Attempts at sampling a general-position straight-line start.
const LAYOUT_RETRIES: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    pub seed: u64,
    pub restarts: usize,
    pub moves_per_restart: usize,
    /// Positions and bends live in `[0, grid_extent)^2`.
    pub grid_extent: i64,
    pub initial_temperature: f64,
    /// Multiplied into the temperature after every move.
    pub cooling_factor: f64,
    /// Stop as soon as a drawing with at most this many crossings is found.
    pub target: Option<u64>,
    pub max_bends: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            seed: 1,
            restarts: 32,
            moves_per_restart: 200_000,
            grid_extent: 64,
            initial_temperature: 2.0,
            cooling_factor: 0.9995,
            target: None,
            max_bends: 4,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.moves_per_restart == 0 {
            return Err(Error::domain("restarts and moves_per_restart must be positive"));
        }
        if self.grid_extent < 2 || self.grid_extent > 1 << 20 {
            return Err(Error::domain("grid_extent must be in 2..=2^20"));
        }
        if self.initial_temperature.is_nan() || self.initial_temperature < 0.0 {
            return Err(Error::domain("initial_temperature must be nonnegative"));
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(Error::domain("cooling_factor must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Result of [`search_best`].
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub drawing: Drawing,
    pub best_total: u64,
    pub target_met: bool,
    /// Best total seen after each completed restart, in restart order.
    pub history: Vec<u64>,
}

/// Mixes a seed with a stream index (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniformly random distinct grid positions with straight edges, resampled
/// until the drawing is in general position.
pub fn random_layout(g: &Graph, seed: u64, grid_extent: i64) -> Result<Drawing> {
    let cells = grid_extent.checked_mul(grid_extent).unwrap_or(i64::MAX);
    if grid_extent < 1 || (g.vertex_count() as i64) > cells {
        return Err(Error::Search(format!(
            "{} vertices do not fit a {grid_extent}x{grid_extent} grid",
            g.vertex_count()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..LAYOUT_RETRIES {
        let mut used = HashSet::new();
        let mut position = BTreeMap::new();
        for &v in g.vertices() {
            let p = loop {
                let p = Point {
                    x: rng.gen_range(0..grid_extent),
                    y: rng.gen_range(0..grid_extent),
                };
                if used.insert(p) {
                    break p;
                }
            };
            position.insert(v, p);
        }
        let d = Drawing::straight(g.clone(), position)?;
        if validate_general_position(&d).overall() {
            return Ok(d);
        }
    }
    Err(Error::Search(format!(
        "no general-position layout found in {LAYOUT_RETRIES} samples"
    )))
}

/// Simulated annealing from `init`. Returns the best drawing seen, which is
/// never worse than `init`.
pub fn anneal(init: &Drawing, params: &SearchParams) -> Result<Drawing> {
    params.validate()?;
    let report = validate_general_position(init);
    if !report.overall() {
        return Err(Error::Degenerate(format!("initial drawing: {report}")));
    }
    let mut state = State::from_drawing(init);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    state.run(&mut rng, params);
    Ok(state.best_drawing(init))
}

/// Independent annealing runs from seeded random starts; keeps the best
/// (lowest total, then lowest restart index).
pub fn search_best(g: &Graph, params: &SearchParams) -> Result<SearchOutcome> {
    params.validate()?;
    let mut best: Option<(u64, Drawing)> = None;
    let mut history = Vec::with_capacity(params.restarts);
    let reached = |total: u64| params.target.is_some_and(|t| total <= t);
    for batch_start in (0..params.restarts).step_by(RESTART_BATCH) {
        let batch_end = (batch_start + RESTART_BATCH).min(params.restarts);
        let runs: Vec<Result<(u64, Drawing)>> = (batch_start..batch_end)
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(params.seed, r as u64);
                let start = random_layout(g, seed, params.grid_extent)?;
                let run_params = SearchParams {
                    seed: derive_seed(seed, u64::MAX),
                    ..params.clone()
                };
                let d = anneal(&start, &run_params)?;
                let total = crate::drawing::count_crossings(&d)?.total;
                Ok((total, d))
            })
            .collect();
        for run in runs {
            let (total, d) = run?;
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                best = Some((total, d));
            }
            history.push(best.as_ref().expect("set").0);
        }
        if best.as_ref().is_some_and(|(b, _)| reached(*b)) {
            break;
        }
    }
    let (best_total, drawing) = best.expect("at least one restart");
    Ok(SearchOutcome {
        drawing,
        best_total,
        target_met: reached(best_total),
        history,
    })
}

/// Mutable drawing in index form with cached pairwise crossing counts.
struct State {
    extent_hint: Option<i64>,
    labels: Vec<VertexLabel>,
    edges: Vec<Edge>,
    ends: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    pos: Vec<Point>,
    bends: Vec<Vec<Point>>,
    occupied: HashSet<Point>,
    cross: Vec<u32>,
    total: u64,
    best_total: u64,
    best: Option<(Vec<Point>, Vec<Vec<Point>>)>,
}

enum Move {
    Vertex { v: usize, to: Point },
    AddBend { e: usize, at: usize, p: Point },
    MoveBend { e: usize, at: usize, p: Point },
    RemoveBend { e: usize, at: usize },
}

impl State {
    fn from_drawing(d: &Drawing) -> Self {
        let labels: Vec<VertexLabel> = d.graph().vertices().iter().copied().collect();
        let index: BTreeMap<VertexLabel, usize> =
            labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<Edge> = d.graph().edges().iter().copied().collect();
        let ends: Vec<(usize, usize)> = edges.iter().map(|e| (index[&e.lo()], index[&e.hi()])).collect();
        let mut incident = vec![Vec::new(); labels.len()];
        for (i, &(a, b)) in ends.iter().enumerate() {
            incident[a].push(i);
            incident[b].push(i);
        }
        let pos: Vec<Point> = labels.iter().map(|v| d.position(*v).expect("positioned")).collect();
        let bends: Vec<Vec<Point>> = edges.iter().map(|&e| d.bends(e).to_vec()).collect();
        let occupied = pos.iter().chain(bends.iter().flatten()).copied().collect();
        let m = edges.len();
        let mut s = State {
            extent_hint: None,
            labels,
            edges,
            ends,
            incident,
            pos,
            bends,
            occupied,
            cross: vec![0; m * m],
            total: 0,
            best_total: u64::MAX,
            best: None,
        };
        for i in 0..m {
            for j in i + 1..m {
                let c = s.pair_crossings(&s.polyline(i), &s.polyline(j));
                s.cross[i * m + j] = c;
                s.cross[j * m + i] = c;
                s.total += u64::from(c);
            }
        }
        s.best_total = s.total;
        s
    }

    fn polyline(&self, e: usize) -> Vec<Point> {
        let (a, b) = self.ends[e];
        let mut line = Vec::with_capacity(self.bends[e].len() + 2);
        line.push(self.pos[a]);
        line.extend_from_slice(&self.bends[e]);
        line.push(self.pos[b]);
        line
    }

    fn pair_crossings(&self, p: &[Point], q: &[Point]) -> u32 {
        let mut c = 0;
        for s in p.windows(2) {
            for t in q.windows(2) {
                if proper_cross(s[0], s[1], t[0], t[1]) {
                    c += 1;
                }
            }
        }
        c
    }

    fn run(&mut self, rng: &mut ChaCha8Rng, params: &SearchParams) {
        self.extent_hint = Some(params.grid_extent);
        let target = params.target;
        let mut temperature = params.initial_temperature;
        let m = self.edges.len();
        if target.is_some_and(|t| self.total <= t) || m == 0 {
            return;
        }
        for _ in 0..params.moves_per_restart {
            if let Some(mv) = self.propose(rng, params) {
                if let Some((affected, lines, delta)) = self.evaluate(&mv) {
                    let accept = delta <= 0
                        || (temperature > 0.0
                            && rng.gen::<f64>() < (-(delta as f64) / temperature).exp());
                    if accept {
                        self.apply(mv, &affected, lines);
                        if self.total < self.best_total {
                            self.best_total = self.total;
                            self.best = Some((self.pos.clone(), self.bends.clone()));
                            if target.is_some_and(|t| self.total <= t) {
                                return;
                            }
                        }
                    }
                }
            }
            temperature *= params.cooling_factor;
        }
    }

    fn random_point(&self, rng: &mut ChaCha8Rng, near: Option<Point>) -> Point {
        let extent = self.extent_hint.expect("set in run");
        match near {
            Some(c) if rng.gen_bool(0.5) => {
                let r = (extent / 8).max(2);
                Point {
                    x: (c.x + rng.gen_range(-r..=r)).clamp(0, extent - 1),
                    y: (c.y + rng.gen_range(-r..=r)).clamp(0, extent - 1),
                }
            }
            _ => Point {
                x: rng.gen_range(0..extent),
                y: rng.gen_range(0..extent),
            },
        }
    }

    fn propose(&self, rng: &mut ChaCha8Rng, params: &SearchParams) -> Option<Move> {
        let m = self.edges.len();
        if params.max_bends == 0 || rng.gen_bool(0.6) {
            let v = rng.gen_range(0..self.pos.len());
            let to = self.random_point(rng, Some(self.pos[v]));
            return (!self.occupied.contains(&to)).then_some(Move::Vertex { v, to });
        }
        let e = rng.gen_range(0..m);
        let k = self.bends[e].len();
        let choice = rng.gen_range(0..3);
        if choice == 0 && k < params.max_bends {
            let at = rng.gen_range(0..=k);
            let line = self.polyline(e);
            let mid = Point {
                x: (line[at].x + line[at + 1].x) / 2,
                y: (line[at].y + line[at + 1].y) / 2,
            };
            let p = self.random_point(rng, Some(mid));
            (!self.occupied.contains(&p)).then_some(Move::AddBend { e, at, p })
        } else if k == 0 {
            None
        } else if choice == 1 {
            let at = rng.gen_range(0..k);
            let p = self.random_point(rng, Some(self.bends[e][at]));
            (!self.occupied.contains(&p)).then_some(Move::MoveBend { e, at, p })
        } else {
            Some(Move::RemoveBend {
                e,
                at: rng.gen_range(0..k),
            })
        }
    }

    /// New polylines of the affected edges and the change in total, or
    /// `None` if the move leaves general position.
    fn evaluate(&self, mv: &Move) -> Option<(Vec<usize>, Vec<Vec<Point>>, i64)> {
        let (affected, new_point): (Vec<usize>, Option<Point>) = match *mv {
            Move::Vertex { v, to } => (self.incident[v].clone(), Some(to)),
            Move::AddBend { e, p, .. } | Move::MoveBend { e, p, .. } => (vec![e], Some(p)),
            Move::RemoveBend { e, .. } => (vec![e], None),
        };
        let lines: Vec<Vec<Point>> = affected
            .iter()
            .map(|&e| {
                let mut line = self.polyline(e);
                match *mv {
                    Move::Vertex { v, to } => {
                        let (a, b) = self.ends[e];
                        if a == v {
                            line[0] = to;
                        }
                        if b == v {
                            *line.last_mut().expect("two points") = to;
                        }
                    }
                    Move::AddBend { at, p, .. } => line.insert(at + 1, p),
                    Move::MoveBend { at, p, .. } => line[at + 1] = p,
                    Move::RemoveBend { at, .. } => {
                        line.remove(at + 1);
                    }
                }
                line
            })
            .collect();

        let vacated = match *mv {
            Move::Vertex { v, .. } => Some(self.pos[v]),
            Move::MoveBend { e, at, .. } | Move::RemoveBend { e, at } => Some(self.bends[e][at]),
            Move::AddBend { .. } => None,
        };
        let is_affected = |e: usize| affected.contains(&e);

        // The new point must not sit inside any unaffected segment.
        if let Some(q) = new_point {
            for f in (0..self.edges.len()).filter(|&f| !is_affected(f)) {
                if self.polyline(f).windows(2).any(|s| on_open_segment(q, s[0], s[1])) {
                    return None;
                }
            }
        }

        // No point of the new configuration may sit inside a new segment.
        for line in &lines {
            for s in line.windows(2) {
                let blocked = self
                    .occupied
                    .iter()
                    .filter(|&&p| Some(p) != vacated)
                    .chain(new_point.iter())
                    .any(|&p| on_open_segment(p, s[0], s[1]));
                if blocked {
                    return None;
                }
            }
        }

        let m = self.edges.len();
        let others: Vec<Vec<Point>> = (0..m)
            .filter(|&f| !is_affected(f))
            .map(|f| self.polyline(f))
            .collect();

        let mut delta: i64 = 0;
        for (ai, line) in lines.iter().enumerate() {
            let e = affected[ai];
            for s in line.windows(2) {
                let mut hits: Vec<Param> = Vec::new();
                for other in &others {
                    for t in other.windows(2) {
                        if proper_cross(s[0], s[1], t[0], t[1]) {
                            delta += 1;
                            hits.push(Param::along(s[0], s[1], t[0], t[1]));
                        }
                    }
                }
                for (bi, other) in lines.iter().enumerate() {
                    for t in other.windows(2) {
                        if std::ptr::eq(t.as_ptr(), s.as_ptr()) {
                            continue;
                        }
                        if proper_cross(s[0], s[1], t[0], t[1]) {
                            hits.push(Param::along(s[0], s[1], t[0], t[1]));
                            if affected[bi] > e {
                                delta += 1;
                            }
                        }
                    }
                }
                hits.sort();
                if hits.windows(2).any(|w| w[0] == w[1]) {
                    return None;
                }
            }
        }
        // Subtract the old contribution of the affected edges.
        for &e in &affected {
            for f in 0..m {
                if !is_affected(f) || f > e {
                    delta -= i64::from(self.cross[e * m + f]);
                }
            }
        }
        Some((affected, lines, delta))
    }

    fn apply(&mut self, mv: Move, affected: &[usize], lines: Vec<Vec<Point>>) {
        match mv {
            Move::Vertex { v, to } => {
                self.occupied.remove(&self.pos[v]);
                self.occupied.insert(to);
                self.pos[v] = to;
            }
            Move::AddBend { e, at, p } => {
                self.occupied.insert(p);
                self.bends[e].insert(at, p);
            }
            Move::MoveBend { e, at, p } => {
                self.occupied.remove(&self.bends[e][at]);
                self.occupied.insert(p);
                self.bends[e][at] = p;
            }
            Move::RemoveBend { e, at } => {
                let p = self.bends[e].remove(at);
                self.occupied.remove(&p);
            }
        }
        drop(lines);
        let m = self.edges.len();
        for &e in affected {
            let line = self.polyline(e);
            for f in 0..m {
                if f == e {
                    continue;
                }
                let c = self.pair_crossings(&line, &self.polyline(f));
                let old = self.cross[e * m + f];
                self.total = self.total + u64::from(c) - u64::from(old);
                self.cross[e * m + f] = c;
                self.cross[f * m + e] = c;
            }
        }
    }

    fn best_drawing(&self, init: &Drawing) -> Drawing {
        let Some((pos, bends)) = &self.best else {
            return init.clone();
        };
        let position = self.labels.iter().copied().zip(pos.iter().copied()).collect();
        let route = self.edges.iter().copied().zip(bends.iter().cloned()).collect();
        Drawing::new(init.graph().clone(), position, route).expect("search keeps drawings valid")
    }
}
