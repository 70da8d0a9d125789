//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p biplanar-cli --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use biplanar::certificate::{component_file_name, plane_components};
use biplanar::construction::{
    build_biplanar_partition, depleted_cube, rho, sigma_map, CubeType, DepletedCubeSpec,
};
use biplanar::drawing::{count_crossings, validate_general_position, Drawing};
use biplanar::geometry::Point;
use biplanar::graph::{complete_graph, hypercube};
use biplanar::iso::verify_isomorphism;
use biplanar::kplanar::{estimate_cr_k, is_structurally_symmetric, kss_feasible};
use biplanar::label::label;
use biplanar::layout::SearchParams;
use biplanar::partition::EdgePartition;
use biplanar::{Edge, Graph, VertexLabel};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const BUILD_VERIFY_LIMIT: Duration = Duration::from_secs(5);
const CERTIFY_LIMIT: Duration = Duration::from_secs(10);
const SEARCH_LIMIT: Duration = Duration::from_secs(600);
const PROPERTY_CASES: u32 = 200;
const MAX_SEGMENTS: usize = 200;
/// Documented fixture seed and target for criterion 4.
const FIXTURE_SEED: &str = "1";
const FIXTURE_TARGET: u64 = 8;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biplanar")).args(args).output().expect("binary runs")
}

fn out(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1(tmp: &Path) -> Verdict {
    let start = Instant::now();
    let file = tmp.join("c1.partition");
    let build = run(&["build", "--out", p(&file)]);
    ensure(build.status.success(), "build failed")?;
    let verify = run(&["verify", "--partition", p(&file)]);
    let elapsed = start.elapsed();
    let report = out(&verify);
    ensure(verify.status.code() == Some(0), format!("verify exit {:?}:\n{report}", verify.status.code()))?;
    for line in [
        "PASS part-sizes: sizes [512, 512]",
        "PASS disjoint: 0 edges in both planes",
        "PASS complete: union has 1024 edges",
        "PASS plane1-components: 8 components [8x(32v,64e)]",
        "PASS plane2-components: 8 components [8x(32v,64e)]",
        "PASS rho-swaps-planes",
        "PASS sigma-isomorphism",
    ] {
        ensure(report.contains(line), format!("missing `{line}`"))?;
    }
    ensure(elapsed < BUILD_VERIFY_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("512/512, disjoint, union 1024, 8x(32v,64e) per plane, rho and sigma hold ({elapsed:.2?})"))
}

fn certify(tmp: &Path, name: &str, components: usize, plane_total: u64, grand: u64) -> Verdict {
    let start = Instant::now();
    let cert = tmp.join(format!("{name}.certificate"));
    let o = run(&[
        "certify",
        "--partition",
        p(&fixtures().join(format!("{name}.partition"))),
        "--drawings",
        p(&fixtures().join(name)),
        "--out",
        p(&cert),
    ]);
    let elapsed = start.elapsed();
    ensure(o.status.success(), format!("certify exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)))?;
    let text = out(&o);
    let lines: Vec<&str> = text.lines().collect();
    ensure(lines.len() == 3, format!("unexpected output {text}"))?;
    let eights = vec!["8"; components].join(",");
    for i in 1..=2 {
        let want = format!("plane {i} total={plane_total} components={eights}");
        ensure(lines[i - 1] == want, format!("got `{}`, want `{want}`", lines[i - 1]))?;
    }
    ensure(lines[2] == grand.to_string(), format!("grand total {}", lines[2]))?;
    ensure(elapsed < CERTIFY_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("{components} components x 8 per plane, planes {plane_total}+{plane_total}, total {grand} ({elapsed:.2?})"))
}

fn criterion_4(tmp: &Path) -> Verdict {
    let mut notes = Vec::new();
    for name in ["d1", "d2", "q4"] {
        let start = Instant::now();
        let drawing = tmp.join(format!("{name}.drawing"));
        let o = run(&[
            "search",
            "--graph",
            p(&fixtures().join(format!("graphs/{name}.graph"))),
            "--seed",
            FIXTURE_SEED,
            "--target",
            &FIXTURE_TARGET.to_string(),
            "--out",
            p(&drawing),
        ]);
        let elapsed = start.elapsed();
        ensure(o.status.code() == Some(0), format!("{name}: search exit {:?}", o.status.code()))?;
        let total: u64 = out(&o).trim().parse().map_err(|_| format!("{name}: bad output"))?;
        let recount = count_crossings(&Drawing::from_text(&fs::read_to_string(&drawing).unwrap()).unwrap())
            .map_err(|e| e.to_string())?
            .total;
        ensure(total <= FIXTURE_TARGET && recount == total, format!("{name}: {total} (recount {recount})"))?;
        ensure(elapsed < SEARCH_LIMIT, format!("{name}: took {elapsed:?}"))?;
        notes.push(format!("{name} {total} in {elapsed:.1?}"));
    }
    Ok(notes.join(", "))
}

fn name(i: usize) -> VertexLabel {
    label(&format!("{i:06b}"))
}

type RawDrawing = (Vec<(i64, i64)>, Vec<(usize, usize, Vec<(i64, i64)>)>);

fn raw_drawing() -> impl Strategy<Value = RawDrawing> {
    (3usize..24).prop_flat_map(|n| {
        (
            prop::collection::vec((0..2000i64, 0..2000i64), n),
            prop::collection::vec((0..n, 0..n, prop::collection::vec((0..2000i64, 0..2000i64), 0..4)), 1..60),
        )
    })
}

fn build((points, edges): &RawDrawing) -> Option<Drawing> {
    let mut route = BTreeMap::new();
    let mut segments = 0;
    for (u, v, bends) in edges {
        let Ok(e) = Edge::new(name(*u), name(*v)) else { continue };
        if route.contains_key(&e) || segments + bends.len() + 1 > MAX_SEGMENTS {
            continue;
        }
        let mut bends: Vec<Point> = bends.iter().map(|&(x, y)| Point { x, y }).collect();
        if e.lo() != name(*u) {
            bends.reverse();
        }
        segments += bends.len() + 1;
        route.insert(e, bends);
    }
    if route.is_empty() {
        return None;
    }
    let graph = Graph::from_edges(6, route.keys().copied()).ok()?;
    let position = graph
        .vertices()
        .iter()
        .map(|&v| {
            let i = usize::from_str_radix(&v.to_string(), 2).unwrap();
            (v, Point { x: points[i].0, y: points[i].1 })
        })
        .collect();
    let d = Drawing::new(graph, position, route).ok()?;
    validate_general_position(&d).overall().then_some(d)
}

fn brute_force(d: &Drawing) -> u64 {
    let side = |a: Point, b: Point, c: Point| {
        ((b.x as i128 - a.x as i128) * (c.y as i128 - a.y as i128)
            - (b.y as i128 - a.y as i128) * (c.x as i128 - a.x as i128))
            .signum()
    };
    let mut segs = Vec::new();
    for (i, &e) in d.graph().edges().iter().enumerate() {
        let line = d.polyline(e);
        for w in line.windows(2) {
            segs.push((i, w[0], w[1]));
        }
    }
    let mut n = 0;
    for (k, &(ei, a, b)) in segs.iter().enumerate() {
        for &(ej, c, e) in &segs[k + 1..] {
            if ei != ej && side(a, b, c) * side(a, b, e) < 0 && side(c, e, a) * side(c, e, b) < 0 {
                n += 1;
            }
        }
    }
    n
}

fn criterion_5() -> Verdict {
    let config = Config {
        cases: PROPERTY_CASES,
        max_global_rejects: 10_000,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha));
    let strategy = (raw_drawing(), -5000i64..5000, -5000i64..5000, 1i64..50);
    let crossings = std::cell::Cell::new(0u64);
    let result = runner.run(&strategy, |(raw, dx, dy, scale)| {
        let d = build(&raw);
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let total = count_crossings(&d).unwrap().total;
        prop_assert_eq!(total, brute_force(&d));
        crossings.set(crossings.get() + total);
        let maps: [&dyn Fn(Point) -> Point; 4] = [
            &|q| Point { x: q.x + dx, y: q.y + dy },
            &|q| Point { x: -q.y, y: q.x },
            &|q| Point { x: q.x, y: -q.y },
            &|q| Point { x: q.x * scale, y: q.y * scale },
        ];
        for f in maps {
            prop_assert_eq!(count_crossings(&d.map_points(f).unwrap()).unwrap().total, total);
        }
        for &e in d.graph().edges() {
            prop_assert!(count_crossings(&d.without_edge(e).unwrap()).unwrap().total <= total);
        }
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    Ok(format!("{PROPERTY_CASES} drawings (<= {MAX_SEGMENTS} segments, {} crossings) match brute force; invariant under translate/rotate/reflect/scale; edge removal monotone", crossings.get()))
}

fn load(path: &Path) -> Drawing {
    Drawing::from_text(&fs::read_to_string(path).unwrap()).unwrap()
}

fn criterion_6() -> Verdict {
    let q8 = hypercube(8).map_err(|e| e.to_string())?;
    for &e in q8.edges() {
        let image = rho(e).map_err(|x| x.to_string())?;
        ensure(rho(image).unwrap() == e && q8.edges().contains(&image), format!("rho fails at {e:?}"))?;
    }
    let partition = build_biplanar_partition().map_err(|e| e.to_string())?;
    let plane2: BTreeMap<BTreeSet<Edge>, ()> = plane_components(&partition, 2)
        .unwrap()
        .into_iter()
        .map(|c| (c.edges().clone(), ()))
        .collect();
    let sigma = sigma_map();
    let components = plane_components(&partition, 1).unwrap().len();
    for j in 1..=components {
        let d = load(&fixtures().join("depleted").join(component_file_name(1, j)));
        let image = d.relabel(&sigma).map_err(|e| e.to_string())?;
        ensure(plane2.contains_key(image.graph().edges()), format!("sigma image of component {j} is not a plane-2 component"))?;
        ensure(validate_general_position(&image).overall(), "image not in general position")?;
        let (a, b) = (count_crossings(&d).unwrap().total, count_crossings(&image).unwrap().total);
        ensure(a == b, format!("component {j}: {a} vs {b}"))?;
    }
    let mut pairs = 0;
    for spec in DepletedCubeSpec::all().into_iter().filter(|s| s.cube_type() == CubeType::Type1) {
        let (a, b) = spec.pair();
        let partner = DepletedCubeSpec::new(CubeType::Type2, (b.complement(), a.complement())).map_err(|e| e.to_string())?;
        let image: BTreeSet<Edge> = depleted_cube(spec)
            .unwrap()
            .edges()
            .iter()
            .map(|e| Edge::new(e.lo().complement(), e.hi().complement()).unwrap())
            .collect();
        ensure(&image == depleted_cube(partner).unwrap().edges(), format!("complement of {spec:?}"))?;
        pairs += 1;
    }
    Ok(format!("rho involution on {} edges; {components} sigma-relabeled fixtures keep their counts; {pairs} complement pairs", q8.edge_count()))
}

fn criterion_7() -> Verdict {
    let k5 = complete_graph(5).unwrap();
    let params = SearchParams { restarts: 2, moves_per_restart: 5_000, grid_extent: 24, ..SearchParams::default() };
    let est = estimate_cr_k(&k5, 2, &params, false).map_err(|e| e.to_string())?;
    ensure(est.best_total == 0 && est.certificate.grand_total == 0, format!("K5 estimate {}", est.best_total))?;
    ensure(est.best_partition.parts().iter().all(|part| !part.is_empty()), "K5 certified with an empty plane")?;
    ensure(!kss_feasible(&complete_graph(3).unwrap(), 2).unwrap(), "triangle reported feasible")?;

    let v: Vec<VertexLabel> = k5.vertices().iter().copied().collect();
    let cycle = |order: [usize; 5]| -> BTreeSet<Edge> {
        (0..5).map(|i| Edge::new(v[order[i]], v[order[(i + 1) % 5]]).unwrap()).collect()
    };
    let two_cycles = EdgePartition::new(k5.clone(), vec![cycle([0, 1, 2, 3, 4]), cycle([0, 2, 4, 1, 3])]).unwrap();
    for (what, part) in [("depleted-cube partition", partition_or(build_biplanar_partition())?), ("K5 5-cycles", two_cycles)] {
        let r = is_structurally_symmetric(&part);
        ensure(r.is_symmetric, format!("{what} not symmetric"))?;
        let (g1, g2) = (part.plane_graph(0).unwrap(), part.plane_graph(1).unwrap());
        ensure(verify_isomorphism(&g1, &g2, &r.witnesses[0]), format!("{what} witness fails"))?;
    }
    Ok("K5 cr_2 <= 0 certified; triangle kss-infeasible; depleted-cube and K5 partitions symmetric with verified witnesses".into())
}

fn partition_or(p: biplanar::Result<EdgePartition>) -> Result<EdgePartition, String> {
    p.map_err(|e| e.to_string())
}

fn criterion_8(tmp: &Path, searched: &Path) -> Verdict {
    let mut compared = 0;
    let mut twice = |label: &str, args: &dyn Fn(&Path) -> Vec<String>| -> Result<(), String> {
        let mut results = Vec::new();
        for round in 0..2 {
            let file = tmp.join(format!("det-{label}-{round}"));
            let argv = args(&file);
            let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
            let o = run(&argv);
            let written = fs::read(&file).unwrap_or_default();
            results.push((o.status.code(), o.stdout, written));
        }
        compared += 1;
        ensure(results[0] == results[1], format!("{label} differs between runs"))
    };
    let fx = |rel: &str| fixtures().join(rel).to_str().unwrap().to_string();
    let s = |x: &str| x.to_string();
    twice("build", &|f| vec![s("build"), s("--out"), p(f).into()])?;
    twice("baseline", &|f| vec![s("build"), s("--baseline"), s("--out"), p(f).into()])?;
    twice("verify", &|_| vec![s("verify"), s("--partition"), fx("depleted.partition")])?;
    twice("count", &|_| vec![s("count"), s("--drawing"), fx("depleted/plane1_comp1.drawing")])?;
    twice("search", &|f| {
        vec![s("search"), s("--graph"), fx("graphs/q4.graph"), s("--restarts"), s("3"), s("--budget"), s("20000"), s("--seed"), s("5"), s("--out"), p(f).into()]
    })?;
    twice("certify", &|f| {
        vec![s("certify"), s("--partition"), fx("depleted.partition"), s("--drawings"), fx("depleted"), s("--out"), p(f).into()]
    })?;
    twice("export", &|f| vec![s("export"), s("--drawing"), fx("search/d2.drawing"), s("--out"), p(f).into()])?;
    twice("explore", &|_| vec![s("explore"), s("--graph"), fx("graphs/k4.graph"), s("--k"), s("2")])?;

    let cert = fs::read(tmp.join("det-certify-0")).unwrap();
    ensure(cert == fs::read(fixtures().join("depleted.certificate")).unwrap(), "certificate differs from the shipped one")?;
    for name in ["d1", "d2", "q4"] {
        let fresh = fs::read(searched.join(format!("{name}.drawing"))).unwrap_or_default();
        let shipped = fs::read(fixtures().join(format!("search/{name}.drawing"))).unwrap();
        ensure(fresh == shipped, format!("re-searched {name} differs from the shipped fixture"))?;
    }
    Ok(format!("{compared} commands byte-identical across runs; certificate and re-searched fixtures match the shipped files"))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    let tmp = dir.path();
    let searched = tmp.join("searched");
    fs::create_dir(&searched).unwrap();
    let results: Vec<(u32, &str, Verdict)> = vec![
        (1, "construction verification", criterion_1(tmp)),
        (2, "128-crossing certificate", certify(tmp, "depleted", 8, 64, 128)),
        (3, "baseline reproduction (256)", certify(tmp, "baseline", 16, 128, 256)),
        (4, "fixture derivability", criterion_4(&searched)),
        (5, "counter soundness", criterion_5()),
        (6, "symmetry properties", criterion_6()),
        (7, "k-planar desk-scale checks", criterion_7()),
        (8, "determinism", criterion_8(tmp, &searched)),
    ];
    let mut all = true;
    for (n, what, verdict) in &results {
        match verdict {
            Ok(detail) => println!("criterion {n} PASS {what}: {detail}"),
            Err(detail) => {
                all = false;
                println!("criterion {n} FAIL {what}: {detail}");
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
