//! Map graphs: interior-disjoint regions, adjacent when their boundaries touch.
//!
//! Pipeline: witness graph -> gadget substitution -> triangulation ->
//! cycle separator -> clique conversion.

use std::collections::HashMap;

use crate::geom::polygon::{locate_in_ring, Location};
use crate::geom::segment::{on_segment, sort_along, properly_cross, seg_intersect, SegIntersection};
use crate::geom::{angle_cmp, GeomError, Point, PolygonalRegion};
use crate::graph::Graph;
use crate::planar::{cycle_separator, triangulate, PlaneGraph, PlanarError};
use crate::separator::{dedup_cliques, merge_cliques, with_component_balancing, CliqueSeparator};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("regions {0} and {1} have overlapping interiors")]
    Overlap(usize, usize),
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error("gadget needs at least two neighbours, got {0}")]
    GadgetTooSmall(usize),
}

fn boxes_touch(a: &(Point, Point), b: &(Point, Point)) -> bool {
    a.0.x() <= b.1.x() && b.0.x() <= a.1.x() && a.0.y() <= b.1.y() && b.0.y() <= a.1.y()
}

/// Pairs of indices whose closed boxes intersect (sweep over x).
pub(crate) fn box_pairs(boxes: &[(Point, Point)]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&i, &j| boxes[i].0.x().cmp(boxes[j].0.x()).then(i.cmp(&j)));
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for &i in &order {
        active.retain(|&j| boxes[j].1.x() >= boxes[i].0.x());
        for &j in &active {
            if boxes_touch(&boxes[i], &boxes[j]) {
                out.push((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    out.sort_unstable();
    out
}

/// Interior-disjoint regions. Vertices of one region lying on an edge of another are
/// inserted into that edge, so every contact is a shared vertex or a shared edge.
#[derive(Debug, Clone)]
pub struct MapInstance {
    pub regions: Vec<PolygonalRegion>,
    adjacent_pairs: Vec<(usize, usize)>,
    index: VertexIndex,
}

/// Distinct boundary points in sorted order, with the incident region corners of each point
/// ranked by the direction of the outgoing edge.
#[derive(Debug, Clone)]
struct VertexIndex {
    points: Vec<Point>,
    /// `(region, vertex, rank)` per point.
    incidence: Vec<Vec<(usize, usize, usize)>>,
    /// Point id of every region vertex.
    vid: Vec<Vec<usize>>,
}

impl VertexIndex {
    fn build(regions: &[PolygonalRegion]) -> Self {
        let mut all: Vec<(&Point, usize, usize)> =
            regions.iter().enumerate().flat_map(|(r, reg)| reg.boundary.iter().enumerate().map(move |(v, p)| (p, r, v))).collect();
        all.sort_by(|a, b| a.0.cmp(b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut points: Vec<Point> = Vec::new();
        let mut incidence: Vec<Vec<(usize, usize, usize)>> = Vec::new();
        let mut vid: Vec<Vec<usize>> = regions.iter().map(|r| vec![0; r.boundary.len()]).collect();
        for (p, r, v) in all {
            if points.last() != Some(p) {
                points.push(p.clone());
                incidence.push(Vec::new());
            }
            let id = points.len() - 1;
            vid[r][v] = id;
            incidence[id].push((r, v, 0));
        }
        for (id, inc) in incidence.iter_mut().enumerate() {
            let p = &points[id];
            let dir = |&(r, v, _): &(usize, usize, usize)| {
                let ring = &regions[r].boundary;
                ring[(v + 1) % ring.len()].sub(p)
            };
            inc.sort_by(|a, b| angle_cmp(&dir(a), &dir(b)).then(a.0.cmp(&b.0)));
            let mut rank = 0;
            for i in 0..inc.len() {
                if i > 0 && angle_cmp(&dir(&inc[i - 1]), &dir(&inc[i])) != std::cmp::Ordering::Equal {
                    rank += 1;
                }
                inc[i].2 = rank;
            }
        }
        VertexIndex { points, incidence, vid }
    }

    fn restrict(&self, nodes: &[usize], n: usize) -> Self {
        let mut pos = vec![usize::MAX; n];
        nodes.iter().enumerate().for_each(|(i, &v)| pos[v] = i);
        let incidence = self
            .incidence
            .iter()
            .map(|inc| inc.iter().filter(|e| pos[e.0] != usize::MAX).map(|&(r, v, k)| (pos[r], v, k)).collect())
            .collect();
        VertexIndex { points: self.points.clone(), incidence, vid: nodes.iter().map(|&v| self.vid[v].clone()).collect() }
    }
}

impl MapInstance {
    pub fn new(rings: Vec<Vec<Point>>) -> Result<Self, MapError> {
        let regions = rings
            .into_iter()
            .enumerate()
            .map(|(i, r)| PolygonalRegion::new(i, r))
            .collect::<Result<Vec<_>, _>>()?;
        let boxes: Vec<(Point, Point)> = regions.iter().map(|r| r.bbox()).collect();
        let pairs = box_pairs(&boxes);
        let inner: Vec<Point> = regions.iter().map(|r| r.interior_point()).collect();
        let fboxes: Vec<[f64; 4]> = regions.iter().map(|r| approx_box(&r.boundary)).collect();
        let mut inserts: Vec<Vec<Vec<Point>>> = regions.iter().map(|r| vec![Vec::new(); r.boundary.len()]).collect();
        let mut adjacent = Vec::new();
        for &(i, j) in &pairs {
            let (a, b) = (&regions[i].boundary, &regions[j].boundary);
            if interiors_overlap(a, b, (&inner[i], &inner[j]), (&fboxes[i], &fboxes[j])) {
                return Err(MapError::Overlap(i, j));
            }
            let mut touch = false;
            for (src, dst, di) in [(b, a, i), (a, b, j)] {
                let m = dst.len();
                for v in src {
                    for e in 0..m {
                        let (p, q) = (&dst[e], &dst[(e + 1) % m]);
                        if on_segment(p, q, v) {
                            touch = true;
                            if v != p && v != q {
                                inserts[di][e].push(v.clone());
                            }
                        }
                    }
                }
            }
            if touch {
                adjacent.push((i, j));
            }
        }
        let regions = regions
            .into_iter()
            .zip(inserts)
            .map(|(r, ins)| {
                let m = r.boundary.len();
                let mut ring = Vec::with_capacity(m);
                for (e, mut extra) in ins.into_iter().enumerate() {
                    let (p, q) = (&r.boundary[e], &r.boundary[(e + 1) % m]);
                    ring.push(p.clone());
                    sort_along(p, q, &mut extra);
                    extra.dedup();
                    ring.extend(extra);
                }
                PolygonalRegion { id: r.id, boundary: ring }
            })
            .collect();
        let regions: Vec<PolygonalRegion> = regions;
        let index = VertexIndex::build(&regions);
        Ok(MapInstance { regions, adjacent_pairs: adjacent, index })
    }

    pub fn n(&self) -> usize {
        self.regions.len()
    }

    /// Sub-instance on `nodes` (region `i` of the result is `nodes[i]`), reusing the contacts
    /// already computed.
    pub fn restrict(&self, nodes: &[usize]) -> MapInstance {
        let mut pos = vec![usize::MAX; self.n()];
        nodes.iter().enumerate().for_each(|(i, &v)| pos[v] = i);
        let regions = nodes
            .iter()
            .enumerate()
            .map(|(i, &v)| PolygonalRegion { id: i, boundary: self.regions[v].boundary.clone() })
            .collect();
        let mut adjacent_pairs: Vec<(usize, usize)> = self
            .adjacent_pairs
            .iter()
            .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b])))
            .collect();
        adjacent_pairs.sort_unstable();
        MapInstance { regions, adjacent_pairs, index: self.index.restrict(nodes, self.n()) }
    }
}

fn approx_box(r: &[Point]) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in r {
        let (x, y) = p.approx();
        b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
    }
    b
}

/// Float box test with slack; `false` only when the boxes are certainly disjoint.
fn approx_boxes_meet(a: &[f64; 4], b: &[f64; 4]) -> bool {
    let slack = 1e-9 * (1.0 + a.iter().chain(b).fold(0.0f64, |m, v| m.max(v.abs())));
    a[0] <= b[2] + slack && b[0] <= a[2] + slack && a[1] <= b[3] + slack && b[1] <= a[3] + slack
}

fn seg_box(p: &Point, q: &Point) -> [f64; 4] {
    let ((px, py), (qx, qy)) = (p.approx(), q.approx());
    [px.min(qx), py.min(qy), px.max(qx), py.max(qy)]
}

/// Exact test for overlapping interiors of two simple counterclockwise rings.
fn interiors_overlap(a: &[Point], b: &[Point], inner: (&Point, &Point), boxes: (&[f64; 4], &[f64; 4])) -> bool {
    let eb: Vec<[f64; 4]> = ring_pairs(b).map(|(u, v)| seg_box(u, v)).collect();
    for (x, y) in ring_pairs(a) {
        let bx = seg_box(x, y);
        if !approx_boxes_meet(&bx, boxes.1) {
            continue;
        }
        for (k, (u, v)) in ring_pairs(b).enumerate() {
            if approx_boxes_meet(&bx, &eb[k]) && properly_cross(x, y, u, v) {
                return true;
            }
        }
    }
    if boundary_enters(a, b, boxes.1) || boundary_enters(b, a, boxes.0) {
        return true;
    }
    locate_in_ring(inner.0, b) == Location::Inside || locate_in_ring(inner.1, a) == Location::Inside
}

fn ring_pairs(r: &[Point]) -> impl Iterator<Item = (&Point, &Point)> {
    let m = r.len();
    (0..m).map(move |i| (&r[i], &r[(i + 1) % m]))
}

/// Does some piece of the boundary of `a` run through the interior of `b`?
fn boundary_enters(a: &[Point], b: &[Point], b_box: &[f64; 4]) -> bool {
    for (p, q) in ring_pairs(a) {
        if !approx_boxes_meet(&seg_box(p, q), b_box) {
            continue;
        }
        let mut cuts = vec![p.clone(), q.clone()];
        for (u, v) in ring_pairs(b) {
            if !approx_boxes_meet(&seg_box(p, q), &seg_box(u, v)) {
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
        if cuts.len() == 2 {
            if locate_in_ring(p, b) == Location::Inside {
                return true;
            }
            continue;
        }
        sort_along(p, q, &mut cuts);
        cuts.dedup();
        for w in cuts.windows(2) {
            if locate_in_ring(&w[0].midpoint(&w[1]), b) == Location::Inside {
                return true;
            }
        }
    }
    false
}

/// Map graph: edge iff the closed regions share a boundary point.
pub fn build_map_graph(inst: &MapInstance) -> Graph {
    Graph::from_edges(inst.n(), &inst.adjacent_pairs).expect("valid pairs")
}

/// Bipartite plane graph of region points and witness points.
#[derive(Debug, Clone)]
pub struct WitnessGraph {
    pub n_regions: usize,
    /// Location of every witness point; empty when built for a separator.
    pub witnesses: Vec<Point>,
    /// Regions around each witness, counterclockwise.
    pub around: Vec<Vec<usize>>,
    /// Witnesses along each region boundary, counterclockwise.
    pub along: Vec<Vec<usize>>,
}

impl WitnessGraph {
    pub fn arcs(&self) -> usize {
        self.around.iter().map(|a| a.len()).sum()
    }

    /// Embedded graph with region nodes `0..n_regions` followed by witness nodes.
    pub fn plane_graph(&self) -> Result<PlaneGraph, PlanarError> {
        let k = self.n_regions;
        let mut rot: Vec<Vec<usize>> = self.along.iter().map(|w| w.iter().map(|&q| k + q).collect()).collect();
        rot.extend(self.around.iter().cloned());
        let n = rot.len();
        PlaneGraph::new(rot, vec![0; n])
    }
}

pub fn build_witness_graph(inst: &MapInstance) -> WitnessGraph {
    build_witness_graph_on(inst, &(0..inst.n()).collect::<Vec<_>>(), true)
}

/// Witness graph of the regions in `members` (local ids follow `members`).
fn build_witness_graph_on(inst: &MapInstance, members: &[usize], positions: bool) -> WitnessGraph {
    let k = members.len();
    let idx = &inst.index;
    let mut local = vec![usize::MAX; inst.n()];
    members.iter().enumerate().for_each(|(i, &r)| local[r] = i);
    let mut witnesses = Vec::new();
    let mut around = Vec::new();
    let mut vertex_witness: HashMap<(usize, usize), usize> = HashMap::new();
    for (pid, inc) in idx.incidence.iter().enumerate() {
        let mut inc: Vec<(usize, usize, usize)> =
            inc.iter().filter(|e| local[e.0] != usize::MAX).map(|&(r, v, rank)| (local[r], v, rank)).collect();
        if inc.len() < 2 {
            continue;
        }
        inc.sort_by_key(|&(l, _, rank)| (rank, l));
        let id = around.len();
        if positions {
            witnesses.push(idx.points[pid].clone());
        }
        around.push(inc.iter().map(|&(l, _, _)| l).collect());
        for &(l, v, _) in &inc {
            vertex_witness.insert((l, v), id);
        }
    }
    // One mid-edge witness per pair of regions sharing an edge.
    let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut edge_witness: HashMap<(usize, usize), usize> = HashMap::new();
    let mut seen_pairs: HashMap<(usize, usize), ()> = HashMap::new();
    for (li, &r) in members.iter().enumerate() {
        let ids = &idx.vid[r];
        let m = ids.len();
        for e in 0..m {
            let (p, q) = (ids[e], ids[(e + 1) % m]);
            if let Some(&(other, oe)) = edge_owner.get(&(q, p)) {
                let pair = (other.min(li), other.max(li));
                if seen_pairs.insert(pair, ()).is_none() {
                    let id = around.len();
                    if positions {
                        witnesses.push(idx.points[p].midpoint(&idx.points[q]));
                    }
                    around.push(vec![other, li]);
                    edge_witness.insert((li, e), id);
                    edge_witness.insert((other, oe), id);
                }
            }
            edge_owner.insert((p, q), (li, e));
        }
    }
    let mut along = vec![Vec::new(); k];
    for (li, &r) in members.iter().enumerate() {
        let m = inst.regions[r].boundary.len();
        for v in 0..m {
            if let Some(&w) = vertex_witness.get(&(li, v)) {
                along[li].push(w);
            }
            if let Some(&w) = edge_witness.get(&(li, v)) {
                along[li].push(w);
            }
        }
    }
    WitnessGraph { n_regions: k, witnesses, around, along }
}

/// Bounded-degree tree replacing the star around a witness with `d >= 3` neighbours.
/// Node 0 is the root; leaves are the last `d` nodes, in neighbour order.
#[derive(Debug, Clone)]
pub struct GadgetTree {
    pub lmax: usize,
    pub level: Vec<usize>,
    pub parent: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    pub levels: Vec<Vec<usize>>,
    pub leaves: Vec<usize>,
}

pub fn gadget_depth(d: usize) -> usize {
    let mut k = 0;
    while 3 * (1usize << k) < d {
        k += 1;
    }
    (k + 1).max(1)
}

pub fn build_gadget(d: usize) -> Result<GadgetTree, MapError> {
    if d < 3 {
        return Err(MapError::GadgetTooSmall(d));
    }
    let lmax = if d == 3 { 1 } else { gadget_depth(d) };
    let mut level = vec![0];
    let mut parent = vec![0];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut levels = vec![vec![0]];
    for l in 1..=lmax {
        let prev = levels[l - 1].clone();
        let mut cur = Vec::new();
        let counts: Vec<usize> = if l == lmax {
            if l == 1 {
                vec![d]
            } else {
                let extra = d - prev.len();
                (0..prev.len()).map(|i| if i < extra { 2 } else { 1 }).collect()
            }
        } else if l == 1 {
            vec![3]
        } else {
            vec![2; prev.len()]
        };
        for (pi, &p) in prev.iter().enumerate() {
            for _ in 0..counts[pi] {
                let id = level.len();
                level.push(l);
                parent.push(p);
                children.push(Vec::new());
                children[p].push(id);
                cur.push(id);
            }
        }
        levels.push(cur);
    }
    let leaves = levels[lmax].clone();
    Ok(GadgetTree { lmax, level, parent, children, levels, leaves })
}

impl GadgetTree {
    pub fn len(&self) -> usize {
        self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level.is_empty()
    }

    pub fn height(&self, v: usize) -> usize {
        self.lmax - self.level[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.level[v] == self.lmax
    }

    fn is_cycle_level(&self, l: usize) -> bool {
        l >= 1 && l < self.lmax
    }

    /// Leaf index range `[lo, hi)` under `v`.
    pub fn leaf_range(&self, v: usize) -> (usize, usize) {
        let mut lo = v;
        while !self.is_leaf(lo) {
            lo = self.children[lo][0];
        }
        let mut hi = v;
        while !self.is_leaf(hi) {
            hi = *self.children[hi].last().unwrap();
        }
        let base = self.leaves[0];
        (lo - base, hi - base + 1)
    }

    /// Counterclockwise rotation for every non-leaf node (leaves appear as neighbours only).
    pub fn rotations(&self) -> Vec<Vec<usize>> {
        let mut rot = vec![Vec::new(); self.len()];
        let pos_in_level: Vec<usize> = {
            let mut p = vec![0; self.len()];
            for lv in &self.levels {
                for (i, &v) in lv.iter().enumerate() {
                    p[v] = i;
                }
            }
            p
        };
        for v in 0..self.len() {
            if self.is_leaf(v) {
                continue;
            }
            let l = self.level[v];
            let mut r = self.children[v].clone();
            if l == 0 {
                rot[v] = r;
                continue;
            }
            let lv = &self.levels[l];
            let k = lv.len();
            let i = pos_in_level[v];
            let next = lv[(i + 1) % k];
            let prev = lv[(i + k - 1) % k];
            if self.is_cycle_level(l + 1) {
                r.push(self.children[next][0]);
            }
            r.push(next);
            r.push(self.parent[v]);
            if self.is_cycle_level(l - 1) && self.children[self.parent[v]][0] == v {
                let pl = &self.levels[l - 1];
                let pk = pl.len();
                let pi = pos_in_level[self.parent[v]];
                r.push(pl[(pi + pk - 1) % pk]);
            }
            r.push(prev);
            rot[v] = r;
        }
        rot
    }
}

/// Checks the subtree-size and leaf-distance bounds of the gadget for `d` neighbours.
/// For `d = 2` the gadget is the star itself.
pub fn audit_gadget(d: usize) -> Result<(), String> {
    if d == 2 {
        return Ok(());
    }
    let t = build_gadget(d).map_err(|e| e.to_string())?;
    let n = t.len();
    let mut adj = vec![Vec::new(); n];
    for (v, r) in t.rotations().into_iter().enumerate() {
        for w in r {
            adj[v].push(w);
            adj[w].push(v);
        }
    }
    let mut dist_to_leaf = vec![usize::MAX; n];
    let mut queue: std::collections::VecDeque<usize> = t.leaves.iter().copied().collect();
    for &l in &t.leaves {
        dist_to_leaf[l] = 0;
    }
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist_to_leaf[w] == usize::MAX {
                dist_to_leaf[w] = dist_to_leaf[u] + 1;
                queue.push_back(w);
            }
        }
    }
    for v in 0..n {
        let h = t.height(v);
        if h == 0 {
            continue;
        }
        let (lo, hi) = t.leaf_range(v);
        if hi - lo > 3 << (h - 1) {
            return Err(format!("d={}: node {} at height {} has {} leaves", d, v, h, hi - lo));
        }
        if dist_to_leaf[v] < h {
            return Err(format!("d={}: node {} at height {} is {} from a leaf", d, v, h, dist_to_leaf[v]));
        }
    }
    Ok(())
}

/// Cliques, sides and bookkeeping of the map separator pipeline.
pub fn map_separator(inst: &MapInstance) -> Result<CliqueSeparator, MapError> {
    map_separator_weighted(inst, &|_| 1)
}

/// Map separator balancing the given integer region weights.
pub fn map_separator_weighted(inst: &MapInstance, weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, MapError> {
    let n = inst.n();
    if n == 0 {
        return Ok(CliqueSeparator::empty());
    }
    let g = build_map_graph(inst);
    let comps = g.components();
    let uniform = (0..n).all(|v| weight(v) == 0);
    let w = move |v: usize| if uniform { 1 } else { weight(v) };
    with_component_balancing(comps, &w, |members| separate_component(inst, &g, members, &w))
}

fn separate_component(inst: &MapInstance, g: &Graph, members: &[usize], weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, MapError> {
    let k = members.len();
    if g.is_clique(members) {
        return Ok(CliqueSeparator::new(vec![members.to_vec()], Vec::new(), Vec::new()));
    }
    let wg = build_witness_graph_on(inst, members, false);
    let (h2, owner) = build_h2(&wg, members, weight)?;
    let tri = triangulate(&h2)?;
    let sep = cycle_separator(&tri)?;

    let mut in_s = vec![false; tri.n()];
    for &v in &sep.s {
        in_s[v] = true;
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let mut singles: Vec<Vec<usize>> = Vec::new();
    for &v in &sep.s {
        if v < k {
            singles.push(vec![members[v]]);
        }
    }
    for (q, gad) in owner.gadgets.iter().enumerate() {
        let regs = &wg.around[q];
        let mut chosen = vec![false; regs.len()];
        match gad {
            Gadget::Path(node) => {
                if in_s[*node] {
                    chosen.iter_mut().for_each(|c| *c = true);
                }
            }
            Gadget::Tree(tree, base) => {
                for v in 0..tree.len() {
                    if !tree.is_leaf(v) && in_s[base + v] {
                        let (lo, hi) = tree.leaf_range(v);
                        for c in &mut chosen[lo..hi] {
                            *c = true;
                        }
                    }
                }
            }
        }
        let c: Vec<usize> = regs.iter().zip(&chosen).filter(|(_, &c)| c).map(|(&l, _)| members[l]).collect();
        if !c.is_empty() {
            cliques.push(c);
        }
    }
    cliques.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    cliques.extend(singles);
    let cliques = merge_cliques(g, dedup_cliques(cliques, inst.n()));
    let mut in_clique = vec![false; inst.n()];
    for &v in cliques.iter().flatten() {
        in_clique[v] = true;
    }
    let mut side = vec![0u8; k];
    for &v in &sep.a {
        if v < k {
            side[v] = 1;
        }
    }
    for &v in &sep.b {
        if v < k {
            side[v] = 2;
        }
    }
    let a = (0..k).filter(|&l| side[l] == 1 && !in_clique[members[l]]).map(|l| members[l]).collect();
    let b = (0..k).filter(|&l| side[l] == 2 && !in_clique[members[l]]).map(|l| members[l]).collect();
    Ok(CliqueSeparator::new(cliques, a, b))
}

enum Gadget {
    Path(usize),
    Tree(GadgetTree, usize),
}

struct H2Owner {
    gadgets: Vec<Gadget>,
}

/// Witness graph with every witness star replaced by its gadget.
fn build_h2(wg: &WitnessGraph, members: &[usize], weight: &dyn Fn(usize) -> u64) -> Result<(PlaneGraph, H2Owner), MapError> {
    let k = wg.n_regions;
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut gadgets = Vec::with_capacity(wg.around.len());
    // For each witness, the H2 node that each incident region connects to.
    let mut attach: Vec<Vec<usize>> = Vec::with_capacity(wg.around.len());
    for regs in &wg.around {
        let d = regs.len();
        let base = rot.len();
        if d == 2 {
            rot.push(regs.clone());
            gadgets.push(Gadget::Path(base));
            attach.push(vec![base; 2]);
            continue;
        }
        let tree = build_gadget(d)?;
        let local_rot = tree.rotations();
        let leaf0 = tree.leaves[0];
        let map = |v: usize| if tree.is_leaf(v) { regs[v - leaf0] } else { base + v };
        for v in 0..tree.len() {
            if tree.is_leaf(v) {
                // Placeholder so that node ids stay aligned with the tree; removed below.
                rot.push(Vec::new());
            } else {
                rot.push(local_rot[v].iter().map(|&w| map(w)).collect());
            }
        }
        attach.push(tree.leaves.iter().map(|&lf| base + tree.parent[lf]).collect());
        gadgets.push(Gadget::Tree(tree, base));
    }
    for (l, ws) in wg.along.iter().enumerate() {
        rot[l] = ws
            .iter()
            .map(|&q| {
                let i = wg.around[q].iter().position(|&r| r == l).unwrap();
                attach[q][i]
            })
            .collect();
    }
    // Drop leaf placeholders by compacting ids.
    let n = rot.len();
    let mut keep = vec![true; n];
    for g in &gadgets {
        if let Gadget::Tree(t, base) = g {
            for &lf in &t.leaves {
                keep[base + lf] = false;
            }
        }
    }
    let mut new_id = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if keep[v] {
            new_id[v] = next;
            next += 1;
        }
    }
    let rot: Vec<Vec<usize>> = (0..n).filter(|&v| keep[v]).map(|v| rot[v].iter().map(|&w| new_id[w]).collect()).collect();
    let gadgets = gadgets
        .into_iter()
        .map(|g| match g {
            Gadget::Path(v) => Gadget::Path(new_id[v]),
            Gadget::Tree(t, base) => {
                // Non-leaf ids stay contiguous; leaves are the tail of each tree.
                let nb = new_id[base];
                Gadget::Tree(t, nb)
            }
        })
        .collect();
    let mut w = vec![0u64; rot.len()];
    for l in 0..k {
        w[l] = weight(members[l]);
    }
    let g = PlaneGraph::new(rot, w)?;
    Ok((g, H2Owner { gadgets }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separator::audit;

    pub(crate) fn square(x: i64, y: i64) -> Vec<Point> {
        vec![
            Point::from_ints(x, y),
            Point::from_ints(x + 1, y),
            Point::from_ints(x + 1, y + 1),
            Point::from_ints(x, y + 1),
        ]
    }

    fn block(k: i64) -> MapInstance {
        let mut rings = Vec::new();
        for y in 0..k {
            for x in 0..k {
                rings.push(square(x, y));
            }
        }
        MapInstance::new(rings).unwrap()
    }

    #[test]
    fn map_graph_examples() {
        let two = MapInstance::new(vec![square(0, 0), square(1, 0)]).unwrap();
        assert_eq!(build_map_graph(&two).m(), 1);
        let g = build_map_graph(&block(2));
        assert_eq!(g.m(), 6);
        let g = build_map_graph(&block(3));
        assert_eq!(g.n(), 9);
        assert_eq!(g.m(), 20);
    }

    #[test]
    fn detects_overlap() {
        let a = vec![Point::from_ints(0, 0), Point::from_ints(2, 0), Point::from_ints(2, 2), Point::from_ints(0, 2)];
        let b = vec![Point::from_ints(1, 0), Point::from_ints(3, 0), Point::from_ints(3, 2), Point::from_ints(1, 2)];
        assert!(matches!(MapInstance::new(vec![a.clone(), b]), Err(MapError::Overlap(0, 1))));
        assert!(MapInstance::new(vec![a.clone(), a]).is_err());
    }

    #[test]
    fn t_junction_is_adjacency() {
        let big = vec![Point::from_ints(0, 0), Point::from_ints(2, 0), Point::from_ints(2, 1), Point::from_ints(0, 1)];
        let inst = MapInstance::new(vec![big, square(0, 1), square(1, 1)]).unwrap();
        let g = build_map_graph(&inst);
        assert_eq!(g.m(), 3);
        assert_eq!(inst.regions[0].boundary.len(), 5);
        let s = map_separator(&inst).unwrap();
        audit(&g, &s, &|_| 1).unwrap();
    }

    #[test]
    fn witness_graph_examples() {
        let two = MapInstance::new(vec![square(0, 0), square(1, 0)]).unwrap();
        let wg = build_witness_graph(&two);
        assert_eq!(wg.witnesses.len(), 3);
        assert_eq!(wg.arcs(), 6);
        wg.plane_graph().unwrap();
        let wg = build_witness_graph(&block(2));
        let centre = wg.witnesses.iter().position(|p| *p == Point::from_ints(1, 1)).unwrap();
        assert_eq!(wg.around[centre].len(), 4);
        wg.plane_graph().unwrap();
        let one = MapInstance::new(vec![square(0, 0)]).unwrap();
        assert!(build_witness_graph(&one).witnesses.is_empty());
    }

    #[test]
    fn gadget_shapes() {
        assert!(build_gadget(2).is_err());
        let g3 = build_gadget(3).unwrap();
        assert_eq!(g3.lmax, 1);
        assert_eq!(g3.children[0].len(), 3);
        let g7 = build_gadget(7).unwrap();
        assert_eq!(g7.lmax, 3);
        assert_eq!(g7.leaves.len(), 7);
    }

    #[test]
    fn observation_one_small() {
        for d in 3..=256 {
            let t = build_gadget(d).unwrap();
            for v in 0..t.len() {
                let h = t.height(v);
                let (lo, hi) = t.leaf_range(v);
                if h >= 1 {
                    assert!(hi - lo <= 3 << (h - 1));
                }
                assert!(t.children[v].len() <= if v == 0 { 3 } else { 2 });
            }
        }
    }

    #[test]
    fn observation_one_audit() {
        for d in 2..=256 {
            audit_gadget(d).unwrap();
        }
    }

    #[test]
    fn gadget_embeddings_are_planar() {
        for d in 3..=40 {
            let t = build_gadget(d).unwrap();
            // Close the leaves with a ring node so that leaf rotations are defined.
            let rot_t = t.rotations();
            let n = t.len();
            let hub = n;
            let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
            for v in 0..n {
                if t.is_leaf(v) {
                    rot[v] = vec![t.parent[v], hub];
                } else {
                    rot[v] = rot_t[v].clone();
                }
            }
            rot[hub] = t.leaves.iter().rev().copied().collect();
            PlaneGraph::new(rot, vec![0; n + 1]).unwrap_or_else(|e| panic!("d={}: {}", d, e));
        }
    }

    #[test]
    fn single_region() {
        let inst = MapInstance::new(vec![square(0, 0)]).unwrap();
        let s = map_separator(&inst).unwrap();
        assert_eq!(s.cliques, vec![vec![0]]);
        assert!(s.a.is_empty() && s.b.is_empty());
    }

    #[test]
    fn block_separators_valid() {
        for k in 5..=9 {
            let inst = block(k);
            let g = build_map_graph(&inst);
            let s = map_separator(&inst).unwrap();
            audit(&g, &s, &|_| 1).unwrap();
            assert!(s.weight <= 10.0 * k as f64, "k={} weight={}", k, s.weight);
        }
    }

    #[test]
    fn pinwheel_is_one_clique() {
        for n in [3usize, 5, 8, 13] {
            let mut rings = Vec::new();
            let r = 1000.0;
            for i in 0..n {
                let a0 = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                let a1 = 2.0 * std::f64::consts::PI * (i + 1) as f64 / n as f64;
                let pt = |a: f64| Point::from_ints((r * a.cos()).round() as i64, (r * a.sin()).round() as i64);
                let a1 = a0 + 0.6 * (a1 - a0);
                rings.push(vec![Point::from_ints(0, 0), pt(a0), pt((a0 + a1) / 2.0), pt(a1)]);
            }
            let inst = MapInstance::new(rings).unwrap();
            let g = build_map_graph(&inst);
            assert_eq!(g.m(), n * (n - 1) / 2);
            let s = map_separator(&inst).unwrap();
            audit(&g, &s, &|_| 1).unwrap();
            assert_eq!(s.cliques.len(), 1, "n={} {:?}", n, s);
            assert_eq!(s.cliques[0].len(), n);
        }
    }

    #[test]
    fn disconnected_map_uses_component_split() {
        let inst = MapInstance::new(vec![square(0, 0), square(5, 0), square(10, 0), square(15, 0)]).unwrap();
        let s = map_separator(&inst).unwrap();
        assert!(s.cliques.is_empty());
        assert_eq!(s.a.len() + s.b.len(), 4);
    }
}
