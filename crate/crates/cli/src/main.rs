//! Command-line front end. Exit codes: 0 the assertion holds, 1 it was
//! checked and failed, 2 input, parse or I/O error, 3 search target unmet.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biplanar::certificate::{
    baseline_component_drawings, certify_components, check_certificate_text, component_file_name,
    depleted_component_drawings, plane_components,
};
use biplanar::construction::{
    build_biplanar_partition, baseline_partition, depleted_cube, verify_construction,
    CubeType, DepletedCubeSpec,
};
use biplanar::drawing::{count_crossings, export_svg, validate_general_position, Drawing};
use biplanar::graph::{complete_graph, hypercube};
use biplanar::kplanar::{explore, format_exploration, kss_feasible};
use biplanar::layout::{search_best, SearchParams};
use biplanar::partition::EdgePartition;
use biplanar::{label::label, Edge, Error, Graph};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "biplanar", version, about = "Biplanar drawings of Q8 and crossing certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the two-plane partition of Q8 (or the sixteen-Q4 baseline).
    Build {
        #[arg(long)]
        out: PathBuf,
        /// Write the baseline partition into sixteen Q4 copies per plane.
        #[arg(long)]
        baseline: bool,
    },
    /// Check the structure of a partition file.
    Verify {
        #[arg(long)]
        partition: PathBuf,
    },
    /// Print the crossing count of a drawing file.
    Count {
        #[arg(long)]
        drawing: PathBuf,
    },
    /// Search for a low-crossing drawing of a graph file.
    Search(SearchArgs),
    /// Assemble and recount a crossing certificate from component drawings.
    Certify {
        #[arg(long)]
        partition: PathBuf,
        /// Directory holding plane<i>_comp<j>.drawing files.
        #[arg(long)]
        drawings: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check a certificate file written by `certify`.
    CheckCertificate {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Render a drawing file as SVG.
    Export {
        #[arg(long)]
        drawing: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate crossing totals of balanced k-part partitions of a small graph.
    Explore {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        symmetric_only: bool,
        /// Maximum number of partitions listed.
        #[arg(long, default_value_t = 50)]
        limit: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Restarts per part search.
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        /// Annealing moves per restart of each part search.
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
    },
    /// Regenerate the fixture tree: graph files, searched drawings, component
    /// drawings for both partitions, and their certificates.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
        /// Seed for the search on D1(0000,1000).
        #[arg(long, default_value_t = FIXTURE_SEED)]
        seed_d1: u64,
        /// Seed for the search on D2(0111,1111).
        #[arg(long, default_value_t = FIXTURE_SEED)]
        seed_d2: u64,
        /// Seed for the search on Q4.
        #[arg(long, default_value_t = FIXTURE_SEED)]
        seed_q4: u64,
    },
}

const FIXTURE_SEED: u64 = 1;

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Annealing moves per restart.
    #[arg(long, default_value_t = 200_000)]
    budget: usize,
    /// Stop once this many crossings or fewer is reached; exit 3 if missed.
    #[arg(long)]
    target: Option<u64>,
    #[arg(long, default_value_t = 4)]
    max_bends: usize,
    /// Positions and bends lie in [0, grid-extent)^2.
    #[arg(long, default_value_t = 64)]
    grid_extent: i64,
    #[arg(long, default_value_t = 2.0)]
    initial_temperature: f64,
    #[arg(long, default_value_t = 0.9995)]
    cooling_factor: f64,
    #[arg(long)]
    out: PathBuf,
}

impl SearchArgs {
    fn params(&self) -> SearchParams {
        SearchParams {
            seed: self.seed,
            restarts: self.restarts,
            moves_per_restart: self.budget,
            grid_extent: self.grid_extent,
            initial_temperature: self.initial_temperature,
            cooling_factor: self.cooling_factor,
            target: self.target,
            max_bends: self.max_bends,
        }
    }
}

enum Failure {
    /// Checked and failed.
    Check(String),
    Input(String),
    Unmet(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
            Failure::Unmet(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Input(m) | Failure::Unmet(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Degenerate(_) | Error::Certificate(_) | Error::Construction(_) | Error::Search(_) => {
                Failure::Check(e.to_string())
            }
            Error::Domain(_) | Error::Parse { .. } | Error::Io(_) => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse<T>(path: &Path, f: impl FnOnce(&str) -> biplanar::Result<T>) -> Result<T, Failure> {
    f(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Build { out, baseline } => {
            let p = if baseline {
                baseline_partition()?
            } else {
                build_biplanar_partition()?
            };
            write(&out, &p.to_text())?;
            for (i, part) in p.parts().iter().enumerate() {
                println!("plane {} edges={} components={}", i + 1, part.len(), plane_components(&p, i + 1)?.len());
            }
            Ok(())
        }
        Command::Verify { partition } => {
            let p = parse(&partition, EdgePartition::from_text)?;
            let report = verify_construction(&p);
            println!("{report}");
            if report.overall() {
                Ok(())
            } else {
                let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
                Err(Failure::Check(format!("failed checks: {}", failed.join(", "))))
            }
        }
        Command::Count { drawing } => {
            let d = parse(&drawing, Drawing::from_text)?;
            let report = validate_general_position(&d);
            if !report.overall() {
                println!("{report}");
                return Err(Failure::Check("drawing is not in general position".into()));
            }
            let count = count_crossings(&d)?;
            for w in &count.goodness_warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", count.total);
            Ok(())
        }
        Command::Search(args) => {
            let g = parse(&args.graph, Graph::from_text)?;
            let outcome = search_best(&g, &args.params())?;
            write(&args.out, &outcome.drawing.to_text())?;
            println!("{}", outcome.best_total);
            match args.target {
                Some(t) if !outcome.target_met => Err(Failure::Unmet(format!(
                    "best total {} exceeds target {t}",
                    outcome.best_total
                ))),
                _ => Ok(()),
            }
        }
        Command::Certify {
            partition,
            drawings,
            out,
        } => certify(&partition, &drawings, &out),
        Command::CheckCertificate { certificate } => {
            let text = read(&certificate)?;
            let checked = check_certificate_text(&text)?;
            let planes: Vec<String> = checked.plane_totals.iter().map(u64::to_string).collect();
            println!("plane totals {}", planes.join(" "));
            println!("{}", checked.grand_total);
            Ok(())
        }
        Command::Export { drawing, out } => {
            let d = parse(&drawing, Drawing::from_text)?;
            write(&out, &export_svg(&d))
        }
        Command::Explore {
            graph,
            k,
            symmetric_only,
            limit,
            seed,
            restarts,
            budget,
        } => {
            let g = parse(&graph, Graph::from_text)?;
            if !kss_feasible(&g, k)? {
                println!("# {} edges are not divisible by k={k}: no structurally symmetric partition", g.edge_count());
            }
            let params = SearchParams {
                seed,
                restarts,
                moves_per_restart: budget,
                ..SearchParams::default()
            };
            let rows = explore(&g, k, symmetric_only, limit, &params)?;
            println!("# totals are upper bounds from search");
            print!("{}", format_exploration(&rows));
            Ok(())
        }
        Command::Fixtures {
            out,
            seed_d1,
            seed_d2,
            seed_q4,
        } => fixtures(&out, seed_d1, seed_d2, seed_q4),
    }
}

fn certify(partition: &Path, dir: &Path, out: &Path) -> Outcome {
    let p = parse(partition, EdgePartition::from_text)?;
    let problems = p.invariant_violations();
    if let Some(first) = problems.first() {
        return Err(Failure::Check(format!("partition is invalid: {first}")));
    }
    if !dir.is_dir() {
        return Err(Failure::Input(format!("{} is not a directory", dir.display())));
    }
    let mut expected = std::collections::BTreeSet::new();
    let mut drawings = Vec::new();
    let mut missing = Vec::new();
    for plane in 1..=p.k() {
        let mut plane_drawings = Vec::new();
        for j in 1..=plane_components(&p, plane)?.len() {
            let name = component_file_name(plane, j);
            let path = dir.join(&name);
            expected.insert(name.clone());
            if path.exists() {
                plane_drawings.push(parse(&path, Drawing::from_text)?);
            } else {
                missing.push(name);
            }
        }
        drawings.push(plane_drawings);
    }
    if !missing.is_empty() {
        return Err(Failure::Check(format!("missing component drawings: {}", missing.join(", "))));
    }
    let entries = fs::read_dir(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let mut unexpected = Vec::new();
    for entry in entries {
        let name = entry
            .map_err(|e| Failure::Input(e.to_string()))?
            .file_name()
            .to_string_lossy()
            .into_owned();
        if name.starts_with("plane") && name.ends_with(".drawing") && !expected.contains(&name) {
            unexpected.push(name);
        }
    }
    if !unexpected.is_empty() {
        unexpected.sort();
        return Err(Failure::Check(format!("unexpected component drawings: {}", unexpected.join(", "))));
    }
    let cert = certify_components(p, drawings)?;
    write(out, &cert.to_text())?;
    for plane in &cert.planes {
        let totals: Vec<String> = plane.component_totals.iter().map(u64::to_string).collect();
        println!("plane {} total={} components={}", plane.plane_index, plane.total, totals.join(","));
    }
    println!("{}", cert.grand_total);
    Ok(())
}

fn edges_graph(width: usize, pairs: &[(&str, &str)]) -> Result<Graph, Failure> {
    let edges = pairs
        .iter()
        .map(|&(a, b)| Edge::new(label(a), label(b)))
        .collect::<biplanar::Result<Vec<_>>>()?;
    Ok(Graph::from_edges(width, edges)?)
}

fn fixture_search(g: &Graph, seed: u64, name: &str) -> Result<Drawing, Failure> {
    let params = SearchParams {
        seed,
        target: Some(8),
        ..SearchParams::default()
    };
    let outcome = search_best(g, &params)?;
    eprintln!("{name}: seed {seed}, {} crossings after {} restarts", outcome.best_total, outcome.history.len());
    if !outcome.target_met {
        return Err(Failure::Unmet(format!("{name}: best total {} exceeds 8", outcome.best_total)));
    }
    Ok(outcome.drawing)
}

fn mkdir(path: &Path) -> Outcome {
    fs::create_dir_all(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_components(dir: &Path, planes: &[Vec<Drawing>]) -> Outcome {
    mkdir(dir)?;
    for (i, plane) in planes.iter().enumerate() {
        for (j, d) in plane.iter().enumerate() {
            write(&dir.join(component_file_name(i + 1, j + 1)), &d.to_text())?;
        }
    }
    Ok(())
}

fn fixtures(out: &Path, seed_d1: u64, seed_d2: u64, seed_q4: u64) -> Outcome {
    let graphs = out.join("graphs");
    mkdir(&graphs)?;
    let d1 = depleted_cube(DepletedCubeSpec::new(CubeType::Type1, (label("0000"), label("1000")))?)?;
    let d2 = depleted_cube(DepletedCubeSpec::new(CubeType::Type2, (label("0111"), label("1111")))?)?;
    let q4 = hypercube(4)?;
    let small = [
        ("triangle", complete_graph(3)?),
        ("k4", complete_graph(4)?),
        ("k5", complete_graph(5)?),
        ("c4", edges_graph(2, &[("00", "01"), ("01", "11"), ("11", "10"), ("10", "00")])?),
        ("tree", edges_graph(3, &[("000", "001"), ("000", "010"), ("000", "100"), ("001", "011"), ("001", "101"), ("100", "110")])?),
        ("q4", q4.clone()),
        ("d1", d1.clone()),
        ("d2", d2.clone()),
    ];
    for (name, g) in &small {
        write(&graphs.join(format!("{name}.graph")), &g.to_text())?;
    }

    let searched = out.join("search");
    mkdir(&searched)?;
    let d1_drawing = fixture_search(&d1, seed_d1, "d1")?;
    let d2_drawing = fixture_search(&d2, seed_d2, "d2")?;
    let q4_drawing = fixture_search(&q4, seed_q4, "q4")?;
    for (name, d) in [("d1", &d1_drawing), ("d2", &d2_drawing), ("q4", &q4_drawing)] {
        write(&searched.join(format!("{name}.drawing")), &d.to_text())?;
    }

    for (name, partition, planes) in [
        ("depleted", build_biplanar_partition()?, depleted_component_drawings(&d1_drawing, &d2_drawing)?),
        ("baseline", baseline_partition()?, baseline_component_drawings(&q4_drawing)?),
    ] {
        write(&out.join(format!("{name}.partition")), &partition.to_text())?;
        write_components(&out.join(name), &planes)?;
        let cert = certify_components(partition, planes)?;
        write(&out.join(format!("{name}.certificate")), &cert.to_text())?;
        println!("{name}: {}", cert.grand_total);
    }
    Ok(())
}
