//! Crossing certificates: a partition plus one drawing per component per
//! plane, with every total recomputed from coordinates.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::construction::{
    build_biplanar_partition, baseline_partition, depleted_cube, sigma_map, CubeType,
    DepletedCubeSpec,
};
use crate::drawing::{count_crossings, disjoint_union_layout, Drawing};
use crate::error::{Error, Result};
use crate::graph::{content_lines, header_value, Edge, Graph};
use crate::iso::{are_isomorphic, verify_isomorphism};
use crate::partition::EdgePartition;

/// Edges listed in a coverage error before the rest are summarized.
const MAX_NAMED: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCertificate {
    /// 1-based plane number.
    pub plane_index: usize,
    pub component_drawings: Vec<Drawing>,
    pub component_totals: Vec<u64>,
    pub assembled: Drawing,
    pub total: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingCertificate {
    pub partition: EdgePartition,
    pub planes: Vec<PlaneCertificate>,
    pub grand_total: u64,
}

fn coverage(part_edges: &BTreeSet<Edge>, drawings: &[Drawing]) -> Result<()> {
    let mut drawn = BTreeSet::new();
    let mut repeated = Vec::new();
    for d in drawings {
        for &e in d.graph().edges() {
            if !drawn.insert(e) {
                repeated.push(e);
            }
        }
    }
    let missing: Vec<Edge> = part_edges.difference(&drawn).copied().collect();
    let extra: Vec<Edge> = drawn.difference(part_edges).copied().collect();
    if missing.is_empty() && extra.is_empty() && repeated.is_empty() {
        return Ok(());
    }
    let name = |es: &[Edge]| {
        let mut s: Vec<String> = es.iter().take(MAX_NAMED).map(|e| format!("{e:?}")).collect();
        if es.len() > MAX_NAMED {
            s.push("...".into());
        }
        s.join(" ")
    };
    Err(Error::Certificate(format!(
        "coverage mismatch: {} missing edges [{}], {} extra edges [{}], {} edges drawn twice [{}]",
        missing.len(),
        name(&missing),
        extra.len(),
        name(&extra),
        repeated.len(),
        name(&repeated)
    )))
}

/// Assembles one plane from vertex-disjoint component drawings whose edges
/// exactly cover `part_edges`, and counts it.
pub fn certify_plane(
    plane_index: usize,
    part_edges: &BTreeSet<Edge>,
    component_drawings: Vec<Drawing>,
) -> Result<PlaneCertificate> {
    coverage(part_edges, &component_drawings)?;
    let component_totals = component_drawings
        .iter()
        .map(|d| count_crossings(d).map(|c| c.total))
        .collect::<Result<Vec<u64>>>()?;
    let assembled = disjoint_union_layout(&component_drawings)?;
    let total = count_crossings(&assembled)?.total;
    let sum: u64 = component_totals.iter().sum();
    if total != sum {
        return Err(Error::Certificate(format!(
            "plane {plane_index}: assembled drawing has {total} crossings, components sum to {sum}"
        )));
    }
    Ok(PlaneCertificate {
        plane_index,
        component_drawings,
        component_totals,
        assembled,
        total,
    })
}

/// Checks plane certificates against a partition of any `k` and recounts
/// everything from raw geometry.
pub fn certify_partition(
    partition: EdgePartition,
    planes: Vec<PlaneCertificate>,
) -> Result<CrossingCertificate> {
    if planes.len() != partition.k() {
        return Err(Error::Certificate(format!(
            "{} plane certificates for a {}-part partition",
            planes.len(),
            partition.k()
        )));
    }
    let mut grand_total = 0;
    for (i, (plane, part)) in planes.iter().zip(partition.parts()).enumerate() {
        if plane.plane_index != i + 1 {
            return Err(Error::Certificate(format!(
                "plane certificate {} is out of order (expected plane {})",
                plane.plane_index,
                i + 1
            )));
        }
        coverage(part, &plane.component_drawings)?;
        for (j, d) in plane.component_drawings.iter().enumerate() {
            let recount = count_crossings(d)
                .map_err(|e| Error::Certificate(format!("plane {} component {}: {e}", i + 1, j + 1)))?
                .total;
            let claimed = plane.component_totals.get(j).copied();
            if claimed != Some(recount) {
                return Err(Error::Certificate(format!(
                    "recount mismatch in plane {} component {}: claimed {claimed:?}, geometry gives {recount}",
                    i + 1,
                    j + 1
                )));
            }
        }
        let assembled = disjoint_union_layout(&plane.component_drawings)?;
        let recount = count_crossings(&assembled)?.total;
        if recount != plane.total || assembled != plane.assembled {
            return Err(Error::Certificate(format!(
                "recount mismatch in plane {}: claimed {}, geometry gives {recount}",
                i + 1,
                plane.total
            )));
        }
        grand_total += recount;
    }
    Ok(CrossingCertificate {
        partition,
        planes,
        grand_total,
    })
}

/// [`certify_partition`] restricted to two planes.
pub fn certify_biplanar(
    partition: EdgePartition,
    planes: Vec<PlaneCertificate>,
) -> Result<CrossingCertificate> {
    if partition.k() != 2 {
        return Err(Error::Certificate(format!(
            "biplanar certificate needs 2 planes, partition has {}",
            partition.k()
        )));
    }
    certify_partition(partition, planes)
}

/// Components of plane `plane` (1-based) that carry at least one edge,
/// ordered by smallest vertex label.
pub fn plane_components(p: &EdgePartition, plane: usize) -> Result<Vec<Graph>> {
    if plane == 0 || plane > p.k() {
        return Err(Error::domain(format!("no plane {plane} in a {}-part partition", p.k())));
    }
    let g = Graph::from_edges(p.host().width(), p.parts()[plane - 1].iter().copied())?;
    Ok(g.connected_components())
}

/// File name of a component drawing inside a drawings directory.
pub fn component_file_name(plane: usize, component: usize) -> String {
    format!("plane{plane}_comp{component}.drawing")
}

/// Moves `template` onto an isomorphic copy `target`, keeping every point.
pub fn transfer_drawing(template: &Drawing, target: &Graph) -> Result<Drawing> {
    let m = are_isomorphic(template.graph(), target).ok_or_else(|| {
        Error::Certificate(format!(
            "template with {} vertices and {} edges is not isomorphic to the target",
            template.graph().vertex_count(),
            template.graph().edge_count()
        ))
    })?;
    debug_assert!(verify_isomorphism(template.graph(), target, &m));
    template.relabel(&m)
}

/// Checks each plane's component drawings and certifies the whole partition.
pub fn certify_components(p: EdgePartition, drawings: Vec<Vec<Drawing>>) -> Result<CrossingCertificate> {
    if drawings.len() != p.k() {
        return Err(Error::Certificate(format!(
            "drawings for {} planes, partition has {}",
            drawings.len(),
            p.k()
        )));
    }
    let planes = drawings
        .into_iter()
        .enumerate()
        .map(|(i, ds)| certify_plane(i + 1, &p.parts()[i], ds))
        .collect::<Result<Vec<_>>>()?;
    certify_partition(p, planes)
}

/// Component drawings for the two-plane depleted-cube partition, in
/// [`plane_components`] order. Type-1 cubes copy `d1`, Type-2 cubes copy
/// `d2`, and Plane 2 is Plane 1 relabeled by the prefix/suffix swap.
pub fn depleted_component_drawings(d1: &Drawing, d2: &Drawing) -> Result<Vec<Vec<Drawing>>> {
    let p = build_biplanar_partition()?;
    let sigma = sigma_map();
    let mut by_edges = std::collections::BTreeMap::new();
    for spec in DepletedCubeSpec::all() {
        let cube = depleted_cube(spec)?;
        let template = match spec.cube_type() {
            CubeType::Type1 => d1,
            CubeType::Type2 => d2,
        };
        let drawing = transfer_drawing(template, &cube)?;
        let image = drawing.relabel(&sigma)?;
        by_edges.insert(cube.edges().clone(), drawing);
        by_edges.insert(image.graph().edges().clone(), image);
    }
    (1..=2)
        .map(|plane| {
            plane_components(&p, plane)?
                .iter()
                .map(|c| {
                    by_edges.get(c.edges()).cloned().ok_or_else(|| {
                        Error::Certificate(format!("plane {plane} component is not a depleted cube"))
                    })
                })
                .collect()
        })
        .collect()
}

/// Component drawings for the sixteen-`Q_4`-per-plane baseline, each a copy
/// of `q4`.
pub fn baseline_component_drawings(q4: &Drawing) -> Result<Vec<Vec<Drawing>>> {
    let p = baseline_partition()?;
    (1..=2)
        .map(|plane| {
            plane_components(&p, plane)?
                .iter()
                .map(|c| transfer_drawing(q4, c))
                .collect()
        })
        .collect()
}

impl CrossingCertificate {
    /// Self-contained text: header, per-plane and per-component summary
    /// lines with embedded canonical drawings, and a trailing SHA-256 of
    /// everything above it.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "certificate planes={} total={}\n",
            self.planes.len(),
            self.grand_total
        );
        for plane in &self.planes {
            let _ = writeln!(
                s,
                "plane {} total={} components={}",
                plane.plane_index,
                plane.total,
                plane.component_drawings.len()
            );
            for (j, (d, t)) in plane
                .component_drawings
                .iter()
                .zip(&plane.component_totals)
                .enumerate()
            {
                let _ = writeln!(
                    s,
                    "component {} total={t} bends={} edges={}",
                    j + 1,
                    d.bend_count(),
                    d.graph().edge_count()
                );
                s.push_str(&d.to_text());
            }
        }
        let hash = content_hash(&s);
        let _ = writeln!(s, "verified {hash}");
        s
    }
}

fn content_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Summary of an independently re-checked certificate file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedCertificate {
    pub grand_total: u64,
    pub plane_totals: Vec<u64>,
    pub bends: usize,
}

/// Re-verifies a certificate file: the hash line, then every embedded
/// drawing is recounted and compared with its stated totals.
pub fn check_certificate_text(text: &str) -> Result<CheckedCertificate> {
    let body_end = text
        .trim_end_matches('\n')
        .rfind('\n')
        .map_or(0, |i| i + 1);
    let (body, last) = text.split_at(body_end);
    let stated = last
        .trim()
        .strip_prefix("verified ")
        .ok_or_else(|| Error::Certificate("missing trailing `verified <hash>` line".into()))?;
    if stated != content_hash(body) {
        return Err(Error::Certificate("content hash does not match".into()));
    }

    let lines: Vec<(usize, &str)> = content_lines(body).collect();
    let (n, header) = *lines
        .first()
        .ok_or_else(|| Error::parse(1, "missing `certificate` header"))?;
    if !header.starts_with("certificate ") {
        return Err(Error::parse(n, "expected `certificate planes=<k> total=<n>`"));
    }
    let planes = header_value(n, header, "planes")?;
    let total = header_value(n, header, "total")? as u64;

    let mut plane_totals = Vec::new();
    let mut bends = 0;
    let mut i = 1;
    for p in 1..=planes {
        let (n, line) = *lines
            .get(i)
            .ok_or_else(|| Error::parse(n, format!("missing plane {p}")))?;
        if !line.starts_with(&format!("plane {p} ")) {
            return Err(Error::parse(n, format!("expected header of plane {p}")));
        }
        let plane_total = header_value(n, line, "total")? as u64;
        let components = header_value(n, line, "components")?;
        i += 1;
        let mut sum = 0;
        let mut parts = Vec::new();
        for _ in 0..components {
            let (n, line) = *lines
                .get(i)
                .ok_or_else(|| Error::parse(n, "missing component"))?;
            let stated = header_value(n, line, "total")? as u64;
            let stated_bends = header_value(n, line, "bends")?;
            i += 1;
            let start = i;
            while i < lines.len() && !lines[i].1.starts_with("component ") && !lines[i].1.starts_with("plane ") {
                i += 1;
            }
            let block: String = lines[start..i].iter().map(|(_, l)| format!("{l}\n")).collect();
            let d = Drawing::from_text(&block)?;
            let recount = count_crossings(&d)?.total;
            if recount != stated || d.bend_count() != stated_bends {
                return Err(Error::Certificate(format!(
                    "line {n}: component states {stated} crossings and {stated_bends} bends, drawing has {recount} and {}",
                    d.bend_count()
                )));
            }
            bends += stated_bends;
            sum += recount;
            parts.push(d);
        }
        let recount = count_crossings(&disjoint_union_layout(&parts)?)?.total;
        if recount != plane_total || sum != plane_total {
            return Err(Error::Certificate(format!(
                "plane {p} states {plane_total} crossings, geometry gives {recount}"
            )));
        }
        plane_totals.push(plane_total);
    }
    let grand_total: u64 = plane_totals.iter().sum();
    if grand_total != total {
        return Err(Error::Certificate(format!(
            "header states {total} crossings, planes sum to {grand_total}"
        )));
    }
    Ok(CheckedCertificate {
        grand_total,
        plane_totals,
        bends,
    })
}
