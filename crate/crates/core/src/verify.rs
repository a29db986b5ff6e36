//! Independent separator verification.
//!
//! The intersection graph is rebuilt pair by pair from the exact geometry, and every
//! violation is reported by name.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::geom::polygon::{rings_intersect, Location};
use crate::geom::visibility::sees;
use crate::geom::{dist2, Coord, Point};
use crate::graph::Graph;
use crate::io::{Instance, IoError};
use crate::separator::CliqueSeparator;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownId { id: usize },
    EmptyClique { clique: usize },
    Duplicate { node: usize },
    NotClique { clique: usize, u: usize, v: usize },
    Uncovered { node: usize },
    CrossEdge { a: usize, b: usize },
    Unbalanced { side: char, weight: u64, total: u64 },
    WeightMismatch { stated: f64, actual: f64 },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::UnknownId { .. } => "unknown id",
            Violation::EmptyClique { .. } => "empty clique",
            Violation::Duplicate { .. } => "duplicate node",
            Violation::NotClique { .. } => "not a clique",
            Violation::Uncovered { .. } => "uncovered node",
            Violation::CrossEdge { .. } => "A-B edge",
            Violation::Unbalanced { .. } => "unbalanced",
            Violation::WeightMismatch { .. } => "weight mismatch",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownId { id } => write!(f, "unknown id: {}", id),
            Violation::EmptyClique { clique } => write!(f, "empty clique: {}", clique),
            Violation::Duplicate { node } => write!(f, "duplicate node: {}", node),
            Violation::NotClique { clique, u, v } => write!(f, "not a clique: clique {} has non-adjacent {} and {}", clique, u, v),
            Violation::Uncovered { node } => write!(f, "uncovered node: {}", node),
            Violation::CrossEdge { a, b } => write!(f, "A-B edge: {} in A meets {} in B", a, b),
            Violation::Unbalanced { side, weight, total } => write!(f, "unbalanced: side {} has {} of {}", side, weight, total),
            Violation::WeightMismatch { stated, actual } => write!(f, "weight mismatch: stated {} actual {}", stated, actual),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub edges: usize,
    pub population: u64,
    pub weight: f64,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Float bounding box widened by a relative margin, so that boxes of touching rings overlap.
fn loose_box(ring: &[Point]) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in ring {
        let (x, y) = p.approx();
        b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
    }
    let pad = 1e-9 * (1.0 + b.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    [b[0] - pad, b[1] - pad, b[2] + pad, b[3] + pad]
}

fn ring_pairs_exhaustive(rings: &[&[Point]], edges: &mut Vec<(usize, usize)>) {
    let boxes: Vec<[f64; 4]> = rings.iter().map(|r| loose_box(r)).collect();
    for i in 0..rings.len() {
        for j in i + 1..rings.len() {
            let (a, b) = (&boxes[i], &boxes[j]);
            if a[2] < b[0] || b[2] < a[0] || a[3] < b[1] || b[3] < a[1] {
                continue;
            }
            if rings_intersect(rings[i], rings[j]) {
                edges.push((i, j));
            }
        }
    }
}

/// Intersection graph by exhaustive pair tests.
pub fn brute_graph(inst: &Instance) -> Result<Graph, IoError> {
    let n = inst.n();
    let mut edges = Vec::new();
    match inst {
        Instance::Map(m) => {
            let rings: Vec<&[Point]> = m.regions.iter().map(|r| r.boundary.as_slice()).collect();
            ring_pairs_exhaustive(&rings, &mut edges);
        }
        Instance::PseudoDisk(r) => {
            let rings: Vec<&[Point]> = r.iter().map(|x| x.as_slice()).collect();
            ring_pairs_exhaustive(&rings, &mut edges);
        }
        Instance::Geodesic { polygon, disks } => {
            for i in 0..n {
                for j in i + 1..n {
                    let sum = disks[i].1.clone() + disks[j].1.clone();
                    if dist2(&disks[i].0, &disks[j].0) > sum.clone() * sum.clone() {
                        continue;
                    }
                    let path = polygon.path_dijkstra(&disks[i].0, &disks[j].0).map_err(|e| IoError::Invalid(e.to_string()))?;
                    if path.cmp_length(&sum) != Ordering::Greater {
                        edges.push((i, j));
                    }
                }
            }
        }
        Instance::Visibility(v) => {
            let approx: Vec<(f64, f64)> = v.points.iter().map(|p| p.approx()).collect();
            for i in 0..n {
                for j in i + 1..n {
                    let (dx, dy) = (approx[i].0 - approx[j].0, approx[i].1 - approx[j].1);
                    if dx * dx + dy * dy > 1.0 + 1e-6 || dist2(&v.points[i], &v.points[j]) > Coord::one() {
                        continue;
                    }
                    if sees(&v.points[i], &v.points[j], &v.poly).map_err(|e| IoError::Invalid(e.to_string()))? {
                        edges.push((i, j));
                    }
                }
            }
        }
        Instance::Abstract(g) => return Ok(g.clone()),
    }
    Graph::from_edges(n, &edges).map_err(|e| IoError::Invalid(e.to_string()))
}

/// Balance population: the points that see no reflex vertex within distance `sqrt(2)` for
/// visibility graphs, every object otherwise.
pub fn balance_population(inst: &Instance) -> Vec<u64> {
    match inst {
        Instance::Visibility(v) => {
            let reflex = v.poly.reflex_vertices();
            let two = Coord::from_int(2);
            v.points
                .iter()
                .map(|p| {
                    let near = reflex.iter().any(|r| dist2(p, r) <= two && v.poly.locate(r) != Location::Outside && sees(p, r, &v.poly).unwrap_or(false));
                    u64::from(!near)
                })
                .collect()
        }
        _ => vec![1; inst.n()],
    }
}

/// All violations of `sep` against `g`.
pub fn check_separator(g: &Graph, sep: &CliqueSeparator, population: &[u64]) -> Vec<Violation> {
    let n = g.n();
    let mut out = Vec::new();
    let mut side = vec![0u8; n];
    let mut place = |v: usize, tag: u8, out: &mut Vec<Violation>| {
        if v >= n {
            out.push(Violation::UnknownId { id: v });
        } else if side[v] != 0 {
            out.push(Violation::Duplicate { node: v });
        } else {
            side[v] = tag;
        }
    };
    for (ci, c) in sep.cliques.iter().enumerate() {
        if c.is_empty() {
            out.push(Violation::EmptyClique { clique: ci });
        }
        for &v in c {
            place(v, 1, &mut out);
        }
        'pairs: for (x, &u) in c.iter().enumerate() {
            for &v in &c[x + 1..] {
                if u < n && v < n && u != v && !g.has_edge(u, v) {
                    out.push(Violation::NotClique { clique: ci, u, v });
                    break 'pairs;
                }
            }
        }
    }
    for &v in &sep.a {
        place(v, 2, &mut out);
    }
    for &v in &sep.b {
        place(v, 3, &mut out);
    }
    for (v, &s) in side.iter().enumerate() {
        if s == 0 {
            out.push(Violation::Uncovered { node: v });
        }
    }
    for (u, v) in g.edges() {
        match (side[u], side[v]) {
            (2, 3) => out.push(Violation::CrossEdge { a: u, b: v }),
            (3, 2) => out.push(Violation::CrossEdge { a: v, b: u }),
            _ => {}
        }
    }
    let total: u64 = population.iter().sum();
    for (tag, name) in [(2u8, 'A'), (3u8, 'B')] {
        let weight: u64 = (0..n).filter(|&v| side[v] == tag).map(|v| population[v]).sum();
        if 3 * weight > 2 * total {
            out.push(Violation::Unbalanced { side: name, weight, total });
        }
    }
    let actual: f64 = sep.cliques.iter().map(|c| ((c.len() + 1) as f64).log2()).sum();
    if (actual - sep.weight).abs() > 1e-9 * (1.0 + actual) {
        out.push(Violation::WeightMismatch { stated: sep.weight, actual });
    }
    out
}

pub fn verify(inst: &Instance, sep: &CliqueSeparator) -> Result<VerifyReport, IoError> {
    let g = brute_graph(inst)?;
    let population = balance_population(inst);
    let violations = check_separator(&g, sep, &population);
    Ok(VerifyReport { n: g.n(), edges: g.m(), population: population.iter().sum(), weight: sep.weight, violations })
}
