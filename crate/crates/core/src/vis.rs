//! Separators for visibility-restricted unit-disk graphs in a polygon, possibly with holes.
//!
//! Points that see a reflex vertex within distance `sqrt(2)` are covered by a constant number
//! of cliques per reflex vertex. The remaining points are split by one of `ceil(sqrt(n))`
//! lines through a centerpoint, picking the line whose nearby points form the lightest
//! set of cliques.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;

use crate::gen::clip_halfplane;
use crate::geom::polygon::bbox;
use crate::geom::segment::dist2_point_segment;
use crate::geom::visibility::{clip_line_polygon, clip_line_ring, sees_unchecked, visibility_polygon};
use crate::geom::{dist2, orient, Coord, GeomError, Location, Point, PolygonWithHoles};
use crate::graph::Graph;
use crate::separator::{clique_weight, CliqueSeparator};

/// Largest point set handled by the exact centerpoint search.
pub const EXACT_CENTERPOINT_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VisError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("point {0} is not strictly inside the polygon")]
    Outside(usize),
    #[error("points {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("clique check failed: {0}")]
    CliqueCheck(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone)]
pub struct VisInstance {
    pub poly: PolygonWithHoles,
    pub points: Vec<Point>,
}

impl VisInstance {
    pub fn new(poly: PolygonWithHoles, points: Vec<Point>) -> Result<Self, VisError> {
        for (i, p) in points.iter().enumerate() {
            if poly.locate(p) != Location::Inside {
                return Err(VisError::Outside(i));
            }
        }
        let mut seen: HashMap<&Point, usize> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if let Some(&j) = seen.get(p) {
                return Err(VisError::Duplicate(j, i));
            }
            seen.insert(p, i);
        }
        Ok(VisInstance { poly, points })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Reflex vertices with their predecessor on the ring.
    fn reflex(&self) -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        for r in self.poly.rings() {
            let k = r.len();
            for i in 0..k {
                let prev = &r[(i + k - 1) % k];
                if orient(prev, &r[i], &r[(i + 1) % k]) < 0 {
                    out.push((prev.clone(), r[i].clone()));
                }
            }
        }
        out
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        dist2(&self.points[i], &self.points[j]) <= Coord::one() && sees_unchecked(&self.points[i], &self.points[j], &self.poly)
    }

    /// Every pair of `set` is within unit distance and mutually visible.
    pub fn is_clique(&self, set: &[usize]) -> bool {
        (0..set.len()).all(|a| (a + 1..set.len()).all(|b| self.adjacent(set[a], set[b])))
    }
}

fn floor_i64(x: &Coord) -> i64 {
    x.floor().to_i64().expect("coordinate fits in i64")
}

/// `floor(x * sqrt(2))`, exact.
fn floor_times_sqrt2(x: &Coord) -> i64 {
    if x.is_zero() {
        return 0;
    }
    let two_x2 = Coord::from_int(2) * x.clone() * x.clone();
    let k = two_x2.floor().sqrt().to_i64().expect("small");
    if x.signum() > 0 {
        k
    } else {
        -(k + 1)
    }
}

/// Intersection graph: an edge iff the points are within distance 1 and see each other.
pub fn build_vis_graph(inst: &VisInstance) -> Graph {
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let keys: Vec<(i64, i64)> = inst.points.iter().map(|p| (floor_i64(p.x()), floor_i64(p.y()))).collect();
    for (i, &k) in keys.iter().enumerate() {
        buckets.entry(k).or_default().push(i);
    }
    let mut edges = Vec::new();
    for (i, &(bx, by)) in keys.iter().enumerate() {
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = buckets.get(&(bx + dx, by + dy)) {
                    for &j in list {
                        if j > i && inst.adjacent(i, j) {
                            edges.push((i, j));
                        }
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    Graph::from_edges(inst.n(), &edges).expect("valid ids")
}

/// Splits `group` into cliques greedily (first fit in order).
fn greedy_cliques(inst: &VisInstance, group: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &v in group {
        match out.iter_mut().find(|c| c.iter().all(|&u| inst.adjacent(u, v))) {
            Some(c) => c.push(v),
            None => out.push(vec![v]),
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ReflexCliques {
    pub cliques: Vec<Vec<usize>>,
    /// Points seeing a reflex vertex within `sqrt(2)`.
    pub q1: Vec<usize>,
    pub q2: Vec<usize>,
    /// Cell groups that failed the pairwise check and were split greedily.
    pub repairs: usize,
}

/// Covers the points that see a reflex vertex within distance `sqrt(2)`. Each such point goes
/// to its nearest visible reflex vertex `u`; the points of `u` are split by the line through
/// an incident edge and then by cells of side `1/sqrt(2)` anchored at `u` (at most 32 groups).
pub fn reflex_cliques(inst: &VisInstance) -> ReflexCliques {
    let reflex = inst.reflex();
    let two = Coord::from_int(2);
    let mut groups: BTreeMap<(usize, bool, i64, i64), Vec<usize>> = BTreeMap::new();
    let (mut q1, mut q2) = (Vec::new(), Vec::new());
    for (i, q) in inst.points.iter().enumerate() {
        let mut best: Option<(Coord, usize)> = None;
        for (k, (_, v)) in reflex.iter().enumerate() {
            let d = dist2(q, v);
            if d > two || best.as_ref().is_some_and(|(bd, _)| d >= *bd) {
                continue;
            }
            if sees_unchecked(q, v, &inst.poly) {
                best = Some((d, k));
            }
        }
        match best {
            Some((_, k)) => {
                let (prev, u) = &reflex[k];
                let side = orient(prev, u, q) >= 0;
                let rel = q.sub(u);
                groups.entry((k, side, floor_times_sqrt2(rel.x()), floor_times_sqrt2(rel.y()))).or_default().push(i);
                q1.push(i);
            }
            None => q2.push(i),
        }
    }
    let mut cliques = Vec::new();
    let mut repairs = 0;
    for g in groups.into_values() {
        if inst.is_clique(&g) {
            cliques.push(g);
        } else {
            repairs += 1;
            cliques.extend(greedy_cliques(inst, &g));
        }
    }
    ReflexCliques { cliques, q1, q2, repairs }
}

/// Largest number of points strictly on one side of a line through `c` (over all lines),
/// if it exceeds `2n/3`. Directions through `c` and every point, each with both small
/// rotations, cover all combinatorially distinct lines.
pub fn centerpoint_violation(c: &Point, pts: &[Point]) -> Option<usize> {
    let dirs: Vec<Point> = pts.iter().filter(|p| *p != c).map(|p| p.sub(c)).collect();
    worst_side(c, pts, &dirs)
}

/// As [`centerpoint_violation`], additionally trying the direction of every pair of points.
pub fn centerpoint_violation_exhaustive(c: &Point, pts: &[Point]) -> Option<usize> {
    let mut dirs: Vec<Point> = pts.iter().filter(|p| *p != c).map(|p| p.sub(c)).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] != pts[j] {
                dirs.push(pts[j].sub(&pts[i]));
            }
        }
    }
    worst_side(c, pts, &dirs)
}

fn worst_side(c: &Point, pts: &[Point], dirs: &[Point]) -> Option<usize> {
    let n = pts.len();
    let mut worst = 0;
    for d in dirs {
        let q = c.add(d);
        let (mut l, mut r, mut on_pos, mut on_neg) = (0, 0, 0, 0);
        for p in pts {
            match orient(c, &q, p) {
                1 => l += 1,
                -1 => r += 1,
                _ => match p.sub(c).dot(d).signum() {
                    1 => on_pos += 1,
                    -1 => on_neg += 1,
                    _ => {}
                },
            }
        }
        worst = worst.max(l + on_pos.max(on_neg)).max(r + on_pos.max(on_neg));
    }
    (3 * worst > 2 * n).then_some(worst)
}

#[derive(Debug, Clone)]
pub struct Centerpoint {
    pub point: Point,
    /// Found by the exact half-plane intersection.
    pub exact: bool,
    pub verified: bool,
}

/// Exact centerpoint: a point of the intersection of all closed half-planes bounded by a line
/// through two of the points and holding more than `2n/3` of them.
pub fn exact_centerpoint(pts: &[Point]) -> Option<Point> {
    let n = pts.len();
    let first = pts.first()?;
    let Some(other) = pts.iter().find(|p| *p != first) else {
        return Some(first.clone());
    };
    if pts.iter().all(|p| orient(first, other, p) == 0) {
        let mut sorted = pts.to_vec();
        sorted.sort();
        return Some(sorted[(n - 1) / 2].clone());
    }
    let t = 2 * n / 3;
    let (lo, hi) = bbox(pts);
    let mut region = vec![lo.clone(), Point::new(hi.x().clone(), lo.y().clone()), hi.clone(), Point::new(lo.x().clone(), hi.y().clone())];
    for i in 0..n {
        for j in i + 1..n {
            if pts[i] == pts[j] {
                continue;
            }
            let (mut l, mut r) = (0, 0);
            for p in pts {
                match orient(&pts[i], &pts[j], p) {
                    1 => l += 1,
                    -1 => r += 1,
                    _ => {}
                }
            }
            let on = n - l - r;
            if l + on > t {
                region = clip_halfplane(&region, &pts[i], &pts[j]);
            }
            if r + on > t {
                region = clip_halfplane(&region, &pts[j], &pts[i]);
            }
            if region.is_empty() {
                return None;
            }
        }
    }
    let k = Coord::from_int(region.len() as i64);
    let sx = region.iter().fold(Coord::zero(), |s, p| s + p.x().clone());
    let sy = region.iter().fold(Coord::zero(), |s, p| s + p.y().clone());
    Some(Point::new(sx / k.clone(), sy / k))
}

fn radon4(p: &[(f64, f64)]) -> (f64, f64) {
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    for i in 0..4 {
        let o: Vec<(f64, f64)> = (0..4).filter(|&j| j != i).map(|j| p[j]).collect();
        let s = [cross(o[0], o[1], p[i]), cross(o[1], o[2], p[i]), cross(o[2], o[0], p[i])];
        if s.iter().all(|&v| v >= 0.0) || s.iter().all(|&v| v <= 0.0) {
            return p[i];
        }
    }
    for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        let (d1, d2) = (cross(p[a], p[b], p[c]), cross(p[a], p[b], p[d]));
        let (d3, d4) = (cross(p[c], p[d], p[a]), cross(p[c], p[d], p[b]));
        if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
            let t = d3 / (d3 - d4);
            return (p[a].0 + t * (p[b].0 - p[a].0), p[a].1 + t * (p[b].1 - p[a].1));
        }
    }
    ((p[0].0 + p[1].0 + p[2].0 + p[3].0) / 4.0, (p[0].1 + p[1].1 + p[2].1 + p[3].1) / 4.0)
}

/// Approximate centerpoint by iterated Radon points of random groups of four.
pub fn radon_centerpoint(pts: &[Point], seed: u64) -> Point {
    let mut rng = crate::gen::rng(seed);
    let mut cur: Vec<(f64, f64)> = pts.iter().map(|p| p.approx()).collect();
    while cur.len() >= 4 {
        cur.shuffle(&mut rng);
        let mut next: Vec<(f64, f64)> = cur.chunks_exact(4).map(radon4).collect();
        next.extend_from_slice(cur.chunks_exact(4).remainder());
        if next.len() == cur.len() {
            break;
        }
        cur = next;
        if cur.len() < 4 {
            break;
        }
    }
    let k = cur.len() as f64;
    let (x, y) = cur.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / k, b + p.1 / k));
    Point::new(dyadic(x), dyadic(y))
}

fn dyadic(v: f64) -> Coord {
    let s = (v * (1u64 << 32) as f64).round();
    Coord::from_big(BigInt::from(s as i128), BigInt::from(1u64) << 32)
}

/// Centerpoint of a planar point set. Every line through it leaves at most `2n/3` of the
/// points strictly on either side, which is what the line separator needs.
pub fn polygon_centerpoint(pts: &[Point]) -> Centerpoint {
    if pts.len() <= EXACT_CENTERPOINT_LIMIT {
        if let Some(c) = exact_centerpoint(pts) {
            let verified = centerpoint_violation(&c, pts).is_none();
            return Centerpoint { point: c, exact: true, verified };
        }
    }
    let mut best: Option<(usize, Point)> = None;
    for seed in 0..8 {
        let c = radon_centerpoint(pts, seed);
        match centerpoint_violation(&c, pts) {
            None => return Centerpoint { point: c, exact: false, verified: true },
            Some(w) => {
                if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                    best = Some((w, c));
                }
            }
        }
    }
    let step = pts.len().div_ceil(EXACT_CENTERPOINT_LIMIT);
    let sample: Vec<Point> = pts.iter().step_by(step.max(1)).cloned().collect();
    if let Some(c) = exact_centerpoint(&sample) {
        if centerpoint_violation(&c, pts).is_none() {
            return Centerpoint { point: c, exact: false, verified: true };
        }
    }
    let point = best.map(|b| b.1).unwrap_or_else(|| pts[0].clone());
    Centerpoint { point, exact: false, verified: false }
}

pub fn ceil_sqrt(n: usize) -> usize {
    let mut m = (n as f64).sqrt() as usize;
    while m * m < n {
        m += 1;
    }
    while m > 0 && (m - 1) * (m - 1) >= n {
        m -= 1;
    }
    m
}

/// An `m x m` grid of unit cells centred at `c` with axes `e1`, `e2`.
#[derive(Debug, Clone)]
pub struct Grid {
    pub c: Point,
    pub m: usize,
    pub e1: Point,
    pub e2: Point,
}

impl Grid {
    /// Rotation by the angle with `tan(angle / 2) = t`; rational, so distances are preserved.
    pub fn new(c: Point, m: usize, t: &Coord) -> Self {
        let one = Coord::one();
        let t2 = t.clone() * t.clone();
        let den = one.clone() + t2.clone();
        let e1 = Point::new((one - t2) / den.clone(), Coord::from_int(2) * t.clone() / den);
        let e2 = e1.rot90();
        Grid { c, m, e1, e2 }
    }

    fn half(&self) -> Coord {
        Coord::from_ratio(self.m as i64, 2)
    }

    /// Grid coordinates with the lower-left corner at the origin.
    pub fn frame(&self, q: &Point) -> (Coord, Coord) {
        let d = q.sub(&self.c);
        (d.dot(&self.e1) + self.half(), d.dot(&self.e2) + self.half())
    }

    /// Closed cell containing `q`, if `q` is in the grid.
    pub fn cell(&self, q: &Point) -> Option<(i64, i64)> {
        let (u, v) = self.frame(q);
        let m = Coord::from_int(self.m as i64);
        if u.signum() < 0 || v.signum() < 0 || u > m || v > m {
            return None;
        }
        let top = self.m as i64 - 1;
        Some((floor_i64(&u).min(top), floor_i64(&v).min(top)))
    }

    fn subcell(&self, q: &Point) -> (i64, i64) {
        let (u, v) = self.frame(q);
        let top = 2 * self.m as i64 - 1;
        let two = Coord::from_int(2);
        (floor_i64(&(u * two.clone())).min(top), floor_i64(&(v * two)).min(top))
    }

    /// Points `g_i` on the right side of the grid at heights `-m/2 + i + 1/2`.
    pub fn line_points(&self) -> Vec<Point> {
        let h = self.half();
        (0..self.m)
            .map(|i| {
                let y = Coord::from_ratio(2 * i as i64 + 1, 2) - h.clone();
                self.c.add(&self.e1.scale(&h)).add(&self.e2.scale(&y))
            })
            .collect()
    }
}

/// A line of the family with the cliques covering its nearby points.
#[derive(Debug, Clone)]
pub struct ChordLine {
    pub g: Point,
    /// Points of `Q2` seeing a point of the line inside the polygon within distance 1/2.
    pub members: Vec<usize>,
    pub cliques: Vec<Vec<usize>>,
    pub weight: f64,
    pub pieces: usize,
    /// Pieces that are not the first piece of the line within their cell.
    pub non_entrance: usize,
}

#[derive(Debug, Clone)]
pub struct ChordFamily {
    pub grid: Grid,
    pub rotation_steps: usize,
    pub lines: Vec<ChordLine>,
}

impl ChordFamily {
    pub fn best(&self) -> usize {
        let mut best = 0;
        for (i, l) in self.lines.iter().enumerate() {
            if l.weight < self.lines[best].weight {
                best = i;
            }
        }
        best
    }

    pub fn total_weight(&self) -> f64 {
        self.lines.iter().map(|l| l.weight).sum()
    }

    /// Largest number of lines within distance 1/2 of a point outside the grid.
    pub fn outside_line_count(&self, pts: &[Point]) -> usize {
        let quarter = Coord::from_ratio(1, 4);
        pts.iter()
            .filter(|q| self.grid.cell(q).is_none())
            .map(|q| self.lines.iter().filter(|l| line_dist2(&self.grid.c, &l.g, q) <= quarter).count())
            .max()
            .unwrap_or(0)
    }
}

fn line_dist2(o: &Point, g: &Point, q: &Point) -> Coord {
    let d = g.sub(o);
    let c = d.cross(&q.sub(o));
    (c.clone() * c) / d.dot(&d)
}

struct Piece {
    lo: Coord,
    hi: Coord,
    cell: (i64, i64),
}

/// Pieces of the line `c + t d` inside the polygon, cut at grid lines, in order of `t`.
fn line_pieces(poly: &PolygonWithHoles, grid: &Grid, d: &Point) -> Vec<Piece> {
    let (du, dv) = (d.dot(&grid.e1), d.dot(&grid.e2));
    let h = grid.half();
    let at = |t: &Coord| (h.clone() + t.clone() * du.clone(), h.clone() + t.clone() * dv.clone());
    let cell_at = |t: &Coord| {
        let (u, v) = at(t);
        (floor_i64(&u), floor_i64(&v))
    };
    let mut out = Vec::new();
    for (a, b) in clip_line_polygon(&grid.c, d, poly) {
        let mut cuts = vec![a.clone(), b.clone()];
        for (base, slope) in [(&h, &du), (&h, &dv)] {
            if slope.is_zero() {
                continue;
            }
            // Integer values of base + t * slope for t in (a, b).
            let ea = base.clone() + a.clone() * slope.clone();
            let eb = base.clone() + b.clone() * slope.clone();
            let (lo, hi) = if ea <= eb { (ea, eb) } else { (eb, ea) };
            let mut k: BigInt = lo.floor() + 1;
            while Coord::from_big(k.clone(), BigInt::from(1)) < hi {
                let t = (Coord::from_big(k.clone(), BigInt::from(1)) - base.clone()) / slope.clone();
                cuts.push(t);
                k += 1;
            }
        }
        cuts.sort();
        cuts.dedup();
        if cuts.len() == 1 {
            out.push(Piece { lo: a.clone(), hi: b.clone(), cell: cell_at(&a) });
        }
        for w in cuts.windows(2) {
            let mid = (w[0].clone() + w[1].clone()).half();
            out.push(Piece { lo: w[0].clone(), hi: w[1].clone(), cell: cell_at(&mid) });
        }
    }
    out
}

/// Builds the line family and the cliques of every line.
pub fn chord_cliques(inst: &VisInstance, q2: &[usize], c: &Point) -> Result<ChordFamily, VisError> {
    let m = ceil_sqrt(inst.n()).max(1);
    let reflex: Vec<Point> = inst.reflex().into_iter().map(|(_, v)| v).collect();
    let mut t = Coord::zero();
    let mut steps = 0;
    let grid = loop {
        let grid = Grid::new(c.clone(), m, &t);
        let hits = grid.line_points().iter().any(|g| reflex.iter().any(|v| orient(c, g, v) == 0));
        if !hits || steps >= 40 {
            break grid;
        }
        steps += 1;
        t = if t.is_zero() { Coord::from_ratio(1, 1024) } else { t.half() };
    };
    let quarter = Coord::from_ratio(1, 4);
    let mut vis_cache: HashMap<usize, Vec<Point>> = HashMap::new();
    let mut lines = Vec::with_capacity(m);
    for g in grid.line_points() {
        let d = g.sub(c);
        let dd = d.dot(&d);
        let pieces = line_pieces(&inst.poly, &grid, &d);
        let mut rank: HashMap<(i64, i64), usize> = HashMap::new();
        let mut non_entrance = 0;
        for p in &pieces {
            let r = rank.entry(p.cell).or_insert(0);
            if *r > 0 {
                non_entrance += 1;
            }
            *r += 1;
        }
        let z = |t: &Coord| c.add(&d.scale(t));
        let mut members = Vec::new();
        let mut singles = Vec::new();
        let mut groups: BTreeMap<((i64, i64), usize), Vec<usize>> = BTreeMap::new();
        for &i in q2 {
            let q = &inst.points[i];
            if line_dist2(c, &g, q) > quarter {
                continue;
            }
            let t0 = q.sub(c).dot(&d) / dd.clone();
            let z0 = z(&t0);
            let mut piece = None;
            if inst.poly.locate(&z0) != Location::Outside && sees_unchecked(q, &z0, &inst.poly) {
                piece = pieces.iter().position(|p| p.lo <= t0 && t0 <= p.hi);
            }
            if piece.is_none() {
                if let std::collections::hash_map::Entry::Vacant(e) = vis_cache.entry(i) {
                    e.insert(visibility_polygon(q, &inst.poly)?);
                }
                let seen = clip_line_ring(c, &d, &vis_cache[&i]);
                piece = pieces.iter().position(|p| {
                    seen.iter().any(|(v0, v1)| {
                        let lo = if p.lo > *v0 { &p.lo } else { v0 };
                        let hi = if p.hi < *v1 { &p.hi } else { v1 };
                        lo <= hi && dist2_point_segment(q, &z(lo), &z(hi)) <= quarter
                    })
                });
            }
            let Some(k) = piece else { continue };
            members.push(i);
            if grid.cell(q).is_none() {
                singles.push(vec![i]);
            } else {
                groups.entry((grid.subcell(q), k)).or_default().push(i);
            }
        }
        let mut cliques = singles;
        for (key, grp) in groups {
            if !inst.is_clique(&grp) {
                return Err(VisError::CliqueCheck(format!("subcell {:?} of piece {} on line {}", key.0, key.1, lines.len())));
            }
            cliques.push(grp);
        }
        let weight = clique_weight(&cliques);
        lines.push(ChordLine { g, members, cliques, weight, pieces: pieces.len(), non_entrance });
    }
    Ok(ChordFamily { grid, rotation_steps: steps, lines })
}

#[derive(Debug, Clone)]
pub struct VisSeparation {
    pub separator: CliqueSeparator,
    pub reflex: ReflexCliques,
    pub center: Option<Centerpoint>,
    pub family: Option<ChordFamily>,
    pub chosen: Option<usize>,
}

impl VisSeparation {
    /// Balance population: the points not covered in the first step.
    pub fn population(&self, n: usize) -> Vec<u64> {
        let mut w = vec![0u64; n];
        for &i in &self.reflex.q2 {
            w[i] = 1;
        }
        w
    }
}

/// Separator: reflex-vertex cliques plus the cliques of the lightest line; the remaining
/// points go to the two open sides of that line.
pub fn vis_separator(inst: &VisInstance) -> Result<VisSeparation, VisError> {
    let reflex = reflex_cliques(inst);
    if reflex.q2.is_empty() {
        let separator = CliqueSeparator::new(reflex.cliques.clone(), Vec::new(), Vec::new());
        return Ok(VisSeparation { separator, reflex, center: None, family: None, chosen: None });
    }
    let pts: Vec<Point> = reflex.q2.iter().map(|&i| inst.points[i].clone()).collect();
    let center = polygon_centerpoint(&pts);
    let family = chord_cliques(inst, &reflex.q2, &center.point)?;
    let k = family.best();
    let line = &family.lines[k];
    let mut covered = vec![false; inst.n()];
    line.members.iter().for_each(|&i| covered[i] = true);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for &i in &reflex.q2 {
        if covered[i] {
            continue;
        }
        match orient(&center.point, &line.g, &inst.points[i]) {
            1 => a.push(i),
            -1 => b.push(i),
            _ => unreachable!("points on the line are within distance 1/2 of it"),
        }
    }
    let mut cliques = reflex.cliques.clone();
    cliques.extend(line.cliques.iter().cloned());
    let separator = CliqueSeparator::new(cliques, a, b);
    Ok(VisSeparation { separator, reflex, center: Some(center), family: Some(family), chosen: Some(k) })
}

/// Comb polygon with `r/2` thin teeth on each side of a corridor and a cluster of
/// `floor(n/r)` points at the mouth of every tooth. Clusters on the same side cannot see
/// each other; every top cluster sees every bottom cluster within distance 1.
pub fn gen_comb_lower_bound(r: usize, n: usize) -> Result<VisInstance, VisError> {
    if r < 2 || r % 2 == 1 {
        return Err(VisError::Infeasible(format!("r = {} must be even and positive", r)));
    }
    if r > n {
        return Err(VisError::Infeasible(format!("r = {} exceeds n = {}", r, n)));
    }
    let t = (r / 2) as i64;
    let q = |num: i64, den: i64| Coord::from_ratio(num, den);
    // Unit: pitch = 1 / (2t); teeth occupy the middle half of each pitch.
    let pitch = |k: i64, quarter: i64| q(4 * k + quarter, 8 * t);
    let (h, tall) = (q(1, 4), q(5, 4));
    let mut ring = vec![Point::new(Coord::zero(), -h.clone())];
    for k in 0..t {
        let (a, b) = (pitch(k, 1), pitch(k, 3));
        ring.push(Point::new(a.clone(), -h.clone()));
        ring.push(Point::new(a, -tall.clone()));
        ring.push(Point::new(b.clone(), -tall.clone()));
        ring.push(Point::new(b, -h.clone()));
    }
    ring.push(Point::new(q(1, 2), -h.clone()));
    ring.push(Point::new(q(1, 2), h.clone()));
    for k in (0..t).rev() {
        let (a, b) = (pitch(k, 1), pitch(k, 3));
        ring.push(Point::new(b.clone(), h.clone()));
        ring.push(Point::new(b, tall.clone()));
        ring.push(Point::new(a.clone(), tall.clone()));
        ring.push(Point::new(a, h.clone()));
    }
    ring.push(Point::new(Coord::zero(), h.clone()));
    let poly = PolygonWithHoles::simple(ring)?;
    let s = (n / r) as i64;
    // Tooth width w = 1 / (4t); points stay within w/8 of the tooth centre line and w/8 of
    // the mouth.
    let eighth_w = q(1, 32 * t);
    let mut points = Vec::new();
    for sign in [1i64, -1] {
        for k in 0..t {
            let centre = pitch(k, 2);
            for j in 0..s {
                let f = q(j + 1, s + 1);
                let x = centre.clone() + eighth_w.clone() * (f.clone() * Coord::from_int(2) - Coord::one());
                let y = h.clone() + eighth_w.clone() * f;
                points.push(Point::new(x, if sign > 0 { y } else { -y }));
            }
        }
    }
    VisInstance::new(poly, points)
}

/// Cluster index of every point of a comb instance: top clusters first.
pub fn comb_clusters(r: usize, n: usize) -> Vec<usize> {
    let s = n / r;
    (0..r * s).map(|i| i / s).collect()
}
