//! Separators from planar supports: ply peeling followed by a cycle separator on the
//! dual of the arrangement of the residual objects.

use std::collections::HashSet;

use crate::arrangement::{candidate_pairs, Arrangement};
use crate::geom::polygon::{locate_in_ring, ring_edges, rings_intersect};
use crate::geom::segment::{seg_intersect, sort_along, SegIntersection};
use crate::geom::{GeomError, Location, Point};
use crate::graph::Graph;
use crate::planar::{cycle_separator, triangulate, PlanarError, PlaneGraph};
use crate::separator::{dedup_cliques, merge_cliques, with_component_balancing, CliqueSeparator};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SupportError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error("objects {0} and {1} are not pseudo-disks: boundaries cross {2} times")]
    NotPseudoDisks(usize, usize, usize),
}

fn ring_box(r: &[Point]) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in r {
        let (x, y) = p.approx();
        b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
    }
    b
}

/// Pairs of rings with possibly overlapping boxes.
fn ring_pairs(rings: &[Vec<Point>]) -> Vec<(usize, usize)> {
    let boxes: Vec<[f64; 4]> = rings.iter().map(|r| ring_box(r)).collect();
    let mut p = candidate_pairs(&boxes);
    p.sort_unstable();
    p
}

/// Exact intersection graph of closed polygons.
pub fn intersection_graph(rings: &[Vec<Point>]) -> Graph {
    let edges: Vec<(usize, usize)> = ring_pairs(rings).into_iter().filter(|&(i, j)| rings_intersect(&rings[i], &rings[j])).collect();
    Graph::from_edges(rings.len(), &edges).expect("valid ids")
}

/// Number of times the boundary of `a` switches between the inside and the outside of `b`
/// (pieces lying on the boundary of `b` are skipped).
pub fn boundary_crossings(a: &[Point], b: &[Point]) -> usize {
    let bb = ring_box(b);
    let mut states: Vec<bool> = Vec::new();
    for (p, q) in ring_edges(a) {
        let (px, py) = p.approx();
        let (qx, qy) = q.approx();
        let slack = 1e-9 * (1.0 + px.abs() + py.abs() + qx.abs() + qy.abs());
        if px.max(qx) < bb[0] - slack || px.min(qx) > bb[2] + slack || py.max(qy) < bb[1] - slack || py.min(qy) > bb[3] + slack {
            states.push(false);
            continue;
        }
        let mut cuts = vec![p.clone(), q.clone()];
        for (u, v) in ring_edges(b) {
            let (ux, uy) = u.approx();
            let (vx, vy) = v.approx();
            if ux.max(vx) < px.min(qx) - slack
                || ux.min(vx) > px.max(qx) + slack
                || uy.max(vy) < py.min(qy) - slack
                || uy.min(vy) > py.max(qy) + slack
            {
                continue;
            }
            match seg_intersect(p, q, u, v) {
                SegIntersection::Empty => {}
                SegIntersection::Point(x) => cuts.push(x),
                SegIntersection::Overlap(x, y) => {
                    cuts.push(x);
                    cuts.push(y);
                }
            }
        }
        if cuts.len() == 2 && !states.is_empty() {
            // No contact with `b`: same state as the previous piece.
            continue;
        }
        sort_along(p, q, &mut cuts);
        cuts.dedup();
        for w in cuts.windows(2) {
            match locate_in_ring(&w[0].midpoint(&w[1]), b) {
                Location::Inside => states.push(true),
                Location::Outside => states.push(false),
                Location::Boundary => {}
            }
        }
    }
    let k = states.len();
    (0..k).filter(|&i| states[i] != states[(i + 1) % k]).count()
}

/// First pair whose boundaries cross more than twice.
pub fn check_pseudo_disks(rings: &[Vec<Point>]) -> Result<(), SupportError> {
    for (i, j) in ring_pairs(rings) {
        let c = boundary_crossings(&rings[i], &rings[j]);
        if c > 2 {
            return Err(SupportError::NotPseudoDisks(i, j, c));
        }
    }
    Ok(())
}

/// `ceil(n^(1/3))` computed on integers.
pub fn ply_threshold(n: usize) -> usize {
    let mut t = 0usize;
    while t * t * t < n {
        t += 1;
    }
    t
}

#[derive(Debug, Clone)]
pub struct Peeled {
    pub cliques: Vec<Vec<usize>>,
    pub residual: Vec<usize>,
    pub residual_ply: usize,
}

/// Repeatedly removes the objects of a deepest face while its depth exceeds `t`.
/// `ids` are the object ids that `rings` stand for.
pub fn ply_peel(rings: &[Vec<Point>], t: usize) -> Result<Peeled, SupportError> {
    let mut cliques = Vec::new();
    if rings.is_empty() {
        return Ok(Peeled { cliques, residual: Vec::new(), residual_ply: 0 });
    }
    // Faces of the full arrangement refine the faces of every sub-arrangement.
    let arr = Arrangement::build(rings)?;
    let mut alive = vec![true; rings.len()];
    loop {
        let depth = |f: usize| arr.faces[f].containing.iter().filter(|&&o| alive[o]).count();
        let best = (0..arr.faces.len()).max_by_key(|&f| (depth(f), std::cmp::Reverse(f))).unwrap();
        let ply = depth(best);
        if ply <= t {
            let residual = (0..rings.len()).filter(|&i| alive[i]).collect();
            return Ok(Peeled { cliques, residual, residual_ply: ply });
        }
        let c: Vec<usize> = arr.faces[best].containing.iter().copied().filter(|&o| alive[o]).collect();
        for &o in &c {
            alive[o] = false;
        }
        cliques.push(c);
    }
}

/// Support graph of a set of objects: dual of their arrangement plus one node per
/// contact vertex (where two objects touch without sharing a face).
pub struct Support {
    pub arr: Arrangement,
    pub contacts: Vec<usize>,
    pub graph: PlaneGraph,
    /// Node representing each object.
    pub rep: Vec<usize>,
}

impl Support {
    pub fn build(rings: &[Vec<Point>], weight: &dyn Fn(usize) -> u64) -> Result<Self, SupportError> {
        let arr = Arrangement::build(rings)?;
        let nf = arr.faces.len();
        let mut shared: HashSet<(usize, usize)> = HashSet::new();
        for f in &arr.faces {
            let c = &f.containing;
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    shared.insert((c[i], c[j]));
                }
            }
        }
        let mut contacts = Vec::new();
        for v in 0..arr.vertices.len() {
            let objs = arr.vertex_objects(v);
            let mut need = false;
            for i in 0..objs.len() {
                for j in i + 1..objs.len() {
                    if shared.insert((objs[i], objs[j])) {
                        need = true;
                    }
                }
            }
            if need {
                contacts.push(v);
            }
        }
        let rot = arr.dual_rotation(&contacts);
        let mut rep = vec![usize::MAX; rings.len()];
        for (f, face) in arr.faces.iter().enumerate() {
            for &o in &face.containing {
                if rep[o] == usize::MAX {
                    rep[o] = f;
                }
            }
        }
        let mut w = vec![0u64; rot.len()];
        for (o, &r) in rep.iter().enumerate() {
            w[r] += weight(o);
        }
        let graph = PlaneGraph::new(rot, w)?;
        debug_assert!(nf <= graph.n());
        Ok(Support { arr, contacts, graph, rep })
    }

    /// Objects stabbed by support node `v` (empty for nodes beyond the support).
    pub fn objects_at(&self, v: usize) -> Vec<usize> {
        let nf = self.arr.faces.len();
        if v < nf {
            self.arr.faces[v].containing.clone()
        } else if v < nf + self.contacts.len() {
            self.arr.vertex_objects(self.contacts[v - nf])
        } else {
            Vec::new()
        }
    }

    /// Support nodes stabbed by each object.
    pub fn hyperedges(&self) -> Vec<Vec<usize>> {
        let mut h = vec![Vec::new(); self.rep.len()];
        for v in 0..self.arr.faces.len() + self.contacts.len() {
            for o in self.objects_at(v) {
                h[o].push(v);
            }
        }
        h
    }
}

/// Separator for a set of objects that all belong to one component of the intersection graph.
fn separate_connected(rings: &[Vec<Point>], g: &Graph, weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, SupportError> {
    let n = rings.len();
    if g.is_clique(&(0..n).collect::<Vec<_>>()) {
        return Ok(CliqueSeparator::new(vec![(0..n).collect()], Vec::new(), Vec::new()));
    }
    let sup = Support::build(rings, weight)?;
    let tri = triangulate(&sup.graph)?;
    let sep = cycle_separator(&tri)?;
    let mut cliques: Vec<Vec<usize>> = sep.s.iter().map(|&v| sup.objects_at(v)).filter(|c| !c.is_empty()).collect();
    cliques.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let cliques = merge_cliques(g, dedup_cliques(cliques, n));
    let mut in_clique = vec![false; n];
    for &o in cliques.iter().flatten() {
        in_clique[o] = true;
    }
    let mut side = vec![0u8; tri.n()];
    for &v in &sep.a {
        side[v] = 1;
    }
    for &v in &sep.b {
        side[v] = 2;
    }
    let a = (0..n).filter(|&o| !in_clique[o] && side[sup.rep[o]] == 1).collect();
    let b = (0..n).filter(|&o| !in_clique[o] && side[sup.rep[o]] == 2).collect();
    Ok(CliqueSeparator::new(cliques, a, b))
}

/// Separator from the planar support of the given objects (no peeling).
pub fn support_separator(rings: &[Vec<Point>], weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, SupportError> {
    let g = intersection_graph(rings);
    support_separator_on(rings, &g, weight)
}

fn support_separator_on(rings: &[Vec<Point>], g: &Graph, weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, SupportError> {
    with_component_balancing(g.components(), weight, |members| {
        let sub: Vec<Vec<Point>> = members.iter().map(|&i| rings[i].clone()).collect();
        let sg = g.induced(members).expect("valid members");
        let s = separate_connected(&sub, &sg, &|l| weight(members[l]))?;
        Ok(s.relabel(|l| members[l]))
    })
}

/// Outcome of the pseudo-disk pipeline, kept for audits.
#[derive(Debug, Clone)]
pub struct PseudoDiskResult {
    pub separator: CliqueSeparator,
    pub threshold: usize,
    pub peeled: Peeled,
}

/// Peel to ply `ceil(n^(1/3))`, then separate the residual objects via their support.
pub fn pseudodisk_separator(rings: &[Vec<Point>], force: bool) -> Result<PseudoDiskResult, SupportError> {
    pseudodisk_separator_weighted(rings, &|_| 1, force)
}

pub fn pseudodisk_separator_weighted(
    rings: &[Vec<Point>],
    weight: &dyn Fn(usize) -> u64,
    force: bool,
) -> Result<PseudoDiskResult, SupportError> {
    if !force {
        check_pseudo_disks(rings)?;
    }
    let n = rings.len();
    let t = ply_threshold(n);
    let peeled = ply_peel(rings, t)?;
    let res = &peeled.residual;
    let sub: Vec<Vec<Point>> = res.iter().map(|&i| rings[i].clone()).collect();
    let uniform = res.iter().all(|&i| weight(i) == 0);
    let w = |l: usize| if uniform { 1 } else { weight(res[l]) };
    let inner = support_separator(&sub, &w)?.relabel(|l| res[l]);
    let mut cliques = peeled.cliques.clone();
    cliques.extend(inner.cliques);
    let separator = CliqueSeparator::new(dedup_cliques(cliques, n), inner.a, inner.b);
    Ok(PseudoDiskResult { separator, threshold: t, peeled })
}
