use std::collections::BTreeMap;

use biplanar::construction::{depleted_cube, CubeType, DepletedCubeSpec};
use biplanar::drawing::{count_crossings, validate_general_position, Drawing};
use biplanar::geometry::Point;
use biplanar::graph::{complete_graph, hypercube};
use biplanar::kplanar::euler_lower_bound;
use biplanar::label::label;
use biplanar::layout::{anneal, random_layout, search_best, SearchParams};
use biplanar::{Edge, Graph};

fn total(d: &Drawing) -> u64 {
    count_crossings(d).unwrap().total
}

fn small() -> SearchParams {
    SearchParams {
        restarts: 4,
        moves_per_restart: 20_000,
        grid_extent: 32,
        ..SearchParams::default()
    }
}

#[test]
fn random_layouts_are_seeded_and_valid() {
    let g = hypercube(4).unwrap();
    let a = random_layout(&g, 7, 64).unwrap();
    assert_eq!(a, random_layout(&g, 7, 64).unwrap());
    assert_ne!(a.positions(), random_layout(&g, 8, 64).unwrap().positions());
    assert!(validate_general_position(&a).overall());
    assert!(random_layout(&g, 1, 3).is_err());
}

#[test]
fn cycle_anneals_to_zero() {
    let g = hypercube(2).unwrap();
    let start = Drawing::straight(
        g,
        BTreeMap::from([
            (label("00"), Point { x: 0, y: 0 }),
            (label("11"), Point { x: 3, y: 0 }),
            (label("01"), Point { x: 3, y: 3 }),
            (label("10"), Point { x: 0, y: 3 }),
        ]),
    )
    .unwrap();
    assert_eq!(total(&start), 1);
    assert_eq!(total(&anneal(&start, &small()).unwrap()), 0);
}

#[test]
fn k4_from_convex_position_reaches_zero() {
    let g = complete_graph(4).unwrap();
    let convex: BTreeMap<_, _> = g
        .vertices()
        .iter()
        .zip([(0, 0), (20, 0), (20, 20), (0, 20)])
        .map(|(&v, (x, y))| (v, Point { x, y }))
        .collect();
    let start = Drawing::straight(g, convex).unwrap();
    assert_eq!(total(&start), 1);
    assert_eq!(total(&anneal(&start, &small()).unwrap()), 0);
}

#[test]
fn k5_reaches_one_and_no_lower() {
    let g = complete_graph(5).unwrap();
    assert_eq!(euler_lower_bound(&g), 1);
    let start = random_layout(&g, 3, 32).unwrap();
    let best = anneal(&start, &small()).unwrap();
    assert_eq!(total(&best), 1);
    assert!(total(&best) <= total(&start));
}

#[test]
fn tree_hits_zero_on_first_restart() {
    let edges = ["000 001", "000 010", "000 100", "001 011", "001 101", "100 110"]
        .iter()
        .map(|s| {
            let (a, b) = s.split_once(' ').unwrap();
            Edge::new(label(a), label(b)).unwrap()
        });
    let g = Graph::from_edges(3, edges).unwrap();
    let params = SearchParams { target: Some(0), ..small() };
    let out = search_best(&g, &params).unwrap();
    assert_eq!(out.best_total, 0);
    assert!(out.target_met);
    assert_eq!(out.history[0], 0);
}

#[test]
fn search_is_deterministic_and_monotone() {
    let g = hypercube(4).unwrap();
    let params = SearchParams { restarts: 6, moves_per_restart: 5_000, ..small() };
    let a = search_best(&g, &params).unwrap();
    let b = search_best(&g, &params).unwrap();
    assert_eq!(a.drawing.to_text(), b.drawing.to_text());
    assert_eq!(a.history, b.history);
    assert_eq!(a.history.len(), 6);
    assert!(a.history.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(total(&a.drawing), a.best_total);
    assert_eq!(*a.history.last().unwrap(), a.best_total);
}

#[test]
fn q4_and_depleted_cubes_reach_eight() {
    let d1 = depleted_cube(DepletedCubeSpec::new(CubeType::Type1, (label("0000"), label("1000"))).unwrap()).unwrap();
    for g in [hypercube(4).unwrap(), d1] {
        let params = SearchParams { target: Some(8), ..SearchParams::default() };
        let out = search_best(&g, &params).unwrap();
        assert!(out.best_total <= 8, "{}", out.best_total);
        assert_eq!(total(&out.drawing), out.best_total);
    }
}

#[test]
fn bad_parameters_are_rejected() {
    let g = hypercube(2).unwrap();
    for p in [
        SearchParams { restarts: 0, ..small() },
        SearchParams { cooling_factor: 1.0, ..small() },
        SearchParams { initial_temperature: -1.0, ..small() },
    ] {
        assert!(search_best(&g, &p).is_err());
    }
}
