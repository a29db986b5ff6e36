//! Geodesic shortest paths and geodesic disks in a simple polygon.
//!
//! Paths come from the funnel algorithm over an ear-clipping triangulation. Lengths are
//! sums of square roots; they are compared in 128-bit fixed point with an exact answer
//! whenever the guard band is inconclusive and the path is a single segment.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arrangement::Arrangement;
use crate::geom::polygon::{locate_in_ring, ring_orientation, simplify_ring, triangulate_ring};
use crate::geom::segment::on_segment;
use crate::geom::visibility::{sees_unchecked, visibility_polygon};
use crate::geom::{dist2, orient, Coord, GeomError, Location, Point, PolygonWithHoles};
use crate::graph::{Graph, UnionFind};
use crate::separator::{audit, CliqueSeparator};
use crate::support_sep::{pseudodisk_separator_weighted, SupportError};

/// Fractional bits of the fixed-point length guard.
pub const GUARD_BITS: u32 = 128;
/// Default tolerance is `radius / DEFAULT_TOL_DIV`.
pub const DEFAULT_TOL_DIV: u64 = 64;
/// Tolerance halvings attempted by [`geodisk_separator`].
pub const MAX_RETRIES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeodesicError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error("point {0} lies outside the polygon")]
    Outside(String),
    #[error("radius must be positive")]
    BadRadius,
    #[error("approximate region is not a single simple ring ({0} boundary cycles)")]
    Region(usize),
    #[error("separator still invalid after {attempts} refinements: {detail}")]
    RetriesExhausted { attempts: usize, detail: String, pair: Option<(usize, usize)> },
}

/// `floor(sqrt(x) * 2^GUARD_BITS)` for `x >= 0`.
fn sqrt_fixed(x: &Coord) -> BigInt {
    let scaled: BigInt = (x.numer() << (2 * GUARD_BITS)) / x.denom();
    scaled.sqrt()
}

/// `floor(x * 2^GUARD_BITS)`.
fn to_fixed(x: &Coord) -> BigInt {
    let s = Coord::from_big(x.numer() << GUARD_BITS, x.denom().clone());
    s.floor()
}

fn fixed_to_f64(x: &BigInt) -> f64 {
    let (hi, bits) = (x >> (GUARD_BITS - 52), 52);
    hi.to_f64().unwrap_or(f64::INFINITY) / (1u64 << bits) as f64
}

/// Shortest path as a vertex chain; `sq[i]` is the exact squared length of segment `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicPath {
    pub points: Vec<Point>,
    pub sq: Vec<Coord>,
}

impl GeodesicPath {
    fn from_points(points: Vec<Point>) -> Self {
        let sq = points.windows(2).map(|w| dist2(&w[0], &w[1])).collect();
        GeodesicPath { points, sq }
    }

    /// Fixed-point lower bound on the length; the true value is below `bound + segments`.
    pub fn length_fixed(&self) -> BigInt {
        self.sq.iter().map(sqrt_fixed).sum()
    }

    pub fn length(&self) -> f64 {
        fixed_to_f64(&self.length_fixed())
    }

    pub fn bends(&self) -> &[Point] {
        if self.points.len() <= 2 {
            &[]
        } else {
            &self.points[1..self.points.len() - 1]
        }
    }

    /// Compares the length with a rational bound. Inside the guard band a single segment is
    /// decided exactly; longer paths report `Equal`.
    pub fn cmp_length(&self, bound: &Coord) -> Ordering {
        if self.sq.len() <= 1 {
            let s = self.sq.first().cloned().unwrap_or_else(Coord::zero);
            if bound.signum() < 0 {
                return Ordering::Greater;
            }
            return s.cmp(&(bound.clone() * bound.clone()));
        }
        let f = self.length_fixed();
        let k = BigInt::from(self.sq.len());
        let b = to_fixed(bound);
        if &f + &k <= b {
            Ordering::Less
        } else if f > b {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }
}

/// Drops interior chain points that are collinear with their neighbours.
fn straighten(points: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if out.last() == Some(&p) {
            continue;
        }
        while out.len() >= 2 {
            let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
            if orient(a, b, &p) == 0 && on_segment(a, &p, b) {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// Simple polygon with a triangulation for path queries.
#[derive(Debug, Clone)]
pub struct GeodesicPolygon {
    pub poly: PolygonWithHoles,
    tris: Vec<[usize; 3]>,
    adj: Vec<[Option<usize>; 3]>,
    reflex: Vec<bool>,
}

impl GeodesicPolygon {
    pub fn new(ring: Vec<Point>) -> Result<Self, GeodesicError> {
        let mut ring = simplify_ring(&ring);
        if ring.len() >= 3 && ring_orientation(&ring) < 0 {
            ring.reverse();
        }
        let poly = PolygonWithHoles::simple(ring)?;
        let ring = &poly.outer;
        let n = ring.len();
        let tris: Vec<[usize; 3]> = triangulate_ring(ring).into_iter().map(|(a, b, c)| [a, b, c]).collect();
        let mut by_edge = std::collections::HashMap::new();
        for (t, tri) in tris.iter().enumerate() {
            for k in 0..3 {
                by_edge.insert((tri[k], tri[(k + 1) % 3]), t);
            }
        }
        let adj = tris
            .iter()
            .map(|tri| {
                let mut a = [None; 3];
                for (k, slot) in a.iter_mut().enumerate() {
                    *slot = by_edge.get(&(tri[(k + 1) % 3], tri[k])).copied();
                }
                a
            })
            .collect();
        let reflex = (0..n).map(|i| orient(&ring[(i + n - 1) % n], &ring[i], &ring[(i + 1) % n]) < 0).collect();
        Ok(GeodesicPolygon { poly, tris, adj, reflex })
    }

    pub fn ring(&self) -> &[Point] {
        &self.poly.outer
    }

    pub fn reflex_vertices(&self) -> Vec<usize> {
        (0..self.reflex.len()).filter(|&i| self.reflex[i]).collect()
    }

    pub fn is_reflex(&self, i: usize) -> bool {
        self.reflex[i]
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.poly.locate(p) != Location::Outside
    }

    fn locate_triangle(&self, p: &Point) -> Option<usize> {
        let r = self.ring();
        self.tris.iter().position(|t| (0..3).all(|k| orient(&r[t[k]], &r[t[(k + 1) % 3]], p) >= 0))
    }

    fn check(&self, p: &Point) -> Result<usize, GeodesicError> {
        self.locate_triangle(p).ok_or_else(|| GeodesicError::Outside(format!("{:?}", p.approx())))
    }

    /// Triangles from `s` to `t` in the dual tree.
    fn sleeve(&self, s: usize, t: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.tris.len()];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for w in self.adj[u].iter().flatten() {
                if prev[*w] == usize::MAX {
                    prev[*w] = u;
                    queue.push_back(*w);
                }
            }
        }
        let mut out = vec![t];
        let mut u = t;
        while u != s {
            u = prev[u];
            out.push(u);
        }
        out.reverse();
        out
    }

    /// Shortest path from `p` to `q` inside the polygon (funnel algorithm).
    pub fn path(&self, p: &Point, q: &Point) -> Result<GeodesicPath, GeodesicError> {
        let tp = self.check(p)?;
        let tq = self.check(q)?;
        if p == q {
            return Ok(GeodesicPath::from_points(vec![p.clone()]));
        }
        if tp == tq {
            return Ok(GeodesicPath::from_points(vec![p.clone(), q.clone()]));
        }
        let r = self.ring();
        let sleeve = self.sleeve(tp, tq);
        // Portals as (left, right) seen while walking from p to q.
        let mut portals: Vec<(Point, Point)> = vec![(p.clone(), p.clone())];
        for w in sleeve.windows(2) {
            let tri = &self.tris[w[0]];
            let k = (0..3).find(|&k| self.adj[w[0]][k] == Some(w[1])).expect("adjacent triangles");
            portals.push((r[tri[(k + 1) % 3]].clone(), r[tri[k]].clone()));
        }
        portals.push((q.clone(), q.clone()));
        Ok(GeodesicPath::from_points(straighten(funnel(&portals))))
    }

    pub fn distance_cmp(&self, p: &Point, q: &Point, bound: &Coord) -> Result<Ordering, GeodesicError> {
        Ok(self.path(p, q)?.cmp_length(bound))
    }

    /// Reference shortest path: Dijkstra over the visibility graph of the polygon vertices
    /// and the two endpoints, with fixed-point lengths.
    pub fn path_dijkstra(&self, p: &Point, q: &Point) -> Result<GeodesicPath, GeodesicError> {
        self.check(p)?;
        self.check(q)?;
        if p == q {
            return Ok(GeodesicPath::from_points(vec![p.clone()]));
        }
        let mut nodes: Vec<Point> = vec![p.clone(), q.clone()];
        nodes.extend(self.ring().iter().cloned());
        let n = nodes.len();
        let mut dist: Vec<Option<BigInt>> = vec![None; n];
        let mut prev = vec![usize::MAX; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[0] = Some(BigInt::zero());
        heap.push(std::cmp::Reverse((BigInt::zero(), 0usize)));
        while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            if u == 1 {
                break;
            }
            for v in 0..n {
                if done[v] || nodes[u] == nodes[v] || !sees_unchecked(&nodes[u], &nodes[v], &self.poly) {
                    continue;
                }
                let nd = &d + sqrt_fixed(&dist2(&nodes[u], &nodes[v]));
                if dist[v].as_ref().is_none_or(|old| nd < *old) {
                    dist[v] = Some(nd.clone());
                    prev[v] = u;
                    heap.push(std::cmp::Reverse((nd, v)));
                }
            }
        }
        let mut chain = vec![nodes[1].clone()];
        let mut u = 1;
        while u != 0 {
            u = prev[u];
            chain.push(nodes[u].clone());
        }
        chain.reverse();
        Ok(GeodesicPath::from_points(straighten(chain)))
    }
}

/// Funnel algorithm over a portal sequence whose first and last portals are degenerate.
fn funnel(portals: &[(Point, Point)]) -> Vec<Point> {
    let mut path = vec![portals[0].0.clone()];
    let mut apex = portals[0].0.clone();
    let (mut left, mut right) = (apex.clone(), apex.clone());
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut i = 1;
    while i < portals.len() {
        let (l, r) = &portals[i];
        if orient(&apex, &right, r) >= 0 {
            if apex == right || orient(&apex, &left, r) < 0 {
                right = r.clone();
                right_i = i;
            } else {
                path.push(left.clone());
                apex = left.clone();
                right = apex.clone();
                right_i = left_i;
                i = left_i + 1;
                continue;
            }
        }
        if orient(&apex, &left, l) <= 0 {
            if apex == left || orient(&apex, &right, l) > 0 {
                left = l.clone();
                left_i = i;
            } else {
                path.push(right.clone());
                apex = right.clone();
                left = apex.clone();
                left_i = right_i;
                i = right_i + 1;
                continue;
            }
        }
        i += 1;
    }
    path.push(portals[portals.len() - 1].0.clone());
    path
}

/// Approximated geodesic disk: `boundary_approx` lies inside the true disk and every point
/// of the true disk is within `approx_tolerance` of it.
#[derive(Debug, Clone)]
pub struct GeodesicDisk {
    pub center: Point,
    pub radius: Coord,
    pub boundary_approx: Vec<Point>,
    pub approx_tolerance: Coord,
}

const COORD_BITS: u32 = 32;

fn dyadic_toward_zero(v: f64) -> Coord {
    let s = (v * (1u64 << COORD_BITS) as f64).trunc();
    Coord::from_big(BigInt::from(s as i128), BigInt::from(1u64) << COORD_BITS)
}

/// Polygon inscribed in the circle of radius `rho` around `s` with sagitta at most `sag`.
fn inscribed_polygon(s: &Point, rho: f64, sag: f64) -> Vec<Point> {
    let c = (1.0 - sag / rho).max(-1.0);
    let k = ((std::f64::consts::PI / c.acos()).ceil() as usize).clamp(8, 1 << 14);
    let ring: Vec<Point> = (0..k)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            s.add(&Point::new(dyadic_toward_zero(rho * a.cos()), dyadic_toward_zero(rho * a.sin())))
        })
        .collect();
    simplify_ring(&ring)
}

/// Approximates the geodesic disk of radius `radius` around `center` as the union, over the
/// centre and every reflex vertex `v` closer than `radius`, of the part of the inscribed disk
/// of radius `radius - d(center, v)` around `v` that `v` sees.
pub fn geodisk_region(center: &Point, radius: &Coord, gp: &GeodesicPolygon, tol: &Coord) -> Result<GeodesicDisk, GeodesicError> {
    gp.check(center)?;
    if radius.signum() <= 0 || tol.signum() <= 0 {
        return Err(GeodesicError::BadRadius);
    }
    let rf = radius.to_f64();
    let sag = tol.to_f64() / 2.0;
    let ring = gp.ring();
    // (source, distance, parent source index)
    let mut cands: Vec<(Point, f64, Option<Point>)> = vec![(center.clone(), 0.0, None)];
    for v in gp.reflex_vertices() {
        if ring[v] == *center {
            continue;
        }
        let path = gp.path(center, &ring[v])?;
        if path.cmp_length(radius) != Ordering::Less {
            continue;
        }
        let parent = path.points[path.points.len() - 2].clone();
        cands.push((ring[v].clone(), path.length(), Some(parent)));
    }
    cands.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut kept: Vec<(Point, Vec<Point>)> = Vec::new();
    for (s, d, parent) in cands {
        let rho = rf - d - 1e-12 * (rf + d);
        if rho <= 0.0 {
            continue;
        }
        if let Some(u) = parent {
            let ok = kept.iter().any(|(k, poly)| *k == u && locate_in_ring(&s, poly) == Location::Inside);
            if !ok {
                continue;
            }
        }
        let disk = inscribed_polygon(&s, rho, sag);
        kept.push((s, disk));
    }
    let mut rings = Vec::with_capacity(2 * kept.len());
    for (s, disk) in &kept {
        rings.push(visibility_polygon(s, &gp.poly)?);
        rings.push(disk.clone());
    }
    let arr = Arrangement::build(&rings)?;
    let inside = |f: usize| {
        let c = &arr.faces[f].containing;
        c.iter().any(|&o| o % 2 == 0 && c.binary_search(&(o + 1)).is_ok())
    };
    let cycles: Vec<Vec<Point>> = arr.region_boundary(&inside).into_iter().map(|c| simplify_ring(&c)).collect();
    if cycles.len() != 1 || ring_orientation(&cycles[0]) <= 0 {
        return Err(GeodesicError::Region(cycles.len()));
    }
    Ok(GeodesicDisk {
        center: center.clone(),
        radius: radius.clone(),
        boundary_approx: cycles.into_iter().next().unwrap(),
        approx_tolerance: tol.clone(),
    })
}

/// Distance audit of an approximation: every vertex is within the radius, and vertices off
/// the polygon boundary are within the tolerance of it.
pub fn audit_region(gp: &GeodesicPolygon, disk: &GeodesicDisk) -> Result<(), String> {
    let (rf, tf) = (disk.radius.to_f64(), disk.approx_tolerance.to_f64());
    for v in &disk.boundary_approx {
        let path = gp.path(&disk.center, v).map_err(|e| e.to_string())?;
        if path.cmp_length(&disk.radius) == Ordering::Greater {
            return Err(format!("vertex {:?} is beyond the radius", v.approx()));
        }
        if gp.poly.locate(v) == Location::Inside && path.length() < rf - tf * (1.0 + 1e-9) {
            return Err(format!("vertex {:?} is deeper than the tolerance: {} < {}", v.approx(), path.length(), rf - tf));
        }
    }
    Ok(())
}

/// Intersecting pairs `(i, j, slack)` with `slack = r_i + r_j - d(c_i, c_j) >= 0`.
pub fn geodisk_pairs(disks: &[(Point, Coord)], gp: &GeodesicPolygon) -> Result<Vec<(usize, usize, f64)>, GeodesicError> {
    for (c, r) in disks {
        gp.check(c)?;
        if r.signum() <= 0 {
            return Err(GeodesicError::BadRadius);
        }
    }
    let mut out = Vec::new();
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let sum = disks[i].1.clone() + disks[j].1.clone();
            if dist2(&disks[i].0, &disks[j].0) > sum.clone() * sum.clone() {
                continue;
            }
            let path = gp.path(&disks[i].0, &disks[j].0)?;
            if path.cmp_length(&sum) != Ordering::Greater {
                out.push((i, j, (sum.to_f64() - path.length()).max(0.0)));
            }
        }
    }
    Ok(out)
}

/// Intersection graph of geodesic disks: an edge iff the centre distance is at most the sum
/// of the radii.
pub fn geodisk_graph(disks: &[(Point, Coord)], gp: &GeodesicPolygon) -> Result<Graph, GeodesicError> {
    let edges: Vec<(usize, usize)> = geodisk_pairs(disks, gp)?.into_iter().map(|(i, j, _)| (i, j)).collect();
    Ok(Graph::from_edges(disks.len(), &edges).expect("valid ids"))
}

#[derive(Debug, Clone)]
pub struct GeodesicSeparation {
    pub separator: CliqueSeparator,
    pub regions: Vec<GeodesicDisk>,
    /// Tolerance divisor that produced a valid separator.
    pub tol_div: u64,
    pub attempts: usize,
}

/// Per-disk tolerances: `radius / div`, capped below the slack of every intersecting pair
/// so that approximations of intersecting disks still overlap.
pub fn disk_tolerances(disks: &[(Point, Coord)], pairs: &[(usize, usize, f64)], div: u64) -> Vec<Coord> {
    let mut tol: Vec<f64> = disks.iter().map(|(_, r)| r.to_f64() / div as f64).collect();
    for &(i, j, slack) in pairs {
        tol[i] = tol[i].min(0.9 * slack);
        tol[j] = tol[j].min(0.9 * slack);
    }
    tol.iter()
        .zip(disks)
        .map(|(&t, (_, r))| {
            let floor = r.to_f64() / (1u64 << 20) as f64;
            dyadic_toward_zero(t.max(floor))
        })
        .collect()
}

/// Separator for geodesic disks from the pseudo-disk pipeline on approximated regions,
/// validated against the exact intersection graph and refined on failure.
pub fn geodisk_separator(disks: &[(Point, Coord)], gp: &GeodesicPolygon) -> Result<GeodesicSeparation, GeodesicError> {
    geodisk_separator_tol(disks, gp, DEFAULT_TOL_DIV)
}

/// As [`geodisk_separator`], starting from tolerance `radius / tol_div`.
pub fn geodisk_separator_tol(disks: &[(Point, Coord)], gp: &GeodesicPolygon, tol_div: u64) -> Result<GeodesicSeparation, GeodesicError> {
    let pairs = geodisk_pairs(disks, gp)?;
    if disks.is_empty() {
        return Ok(GeodesicSeparation { separator: CliqueSeparator::empty(), regions: Vec::new(), tol_div, attempts: 1 });
    }
    let edges: Vec<(usize, usize)> = pairs.iter().map(|&(i, j, _)| (i, j)).collect();
    let g = Graph::from_edges(disks.len(), &edges).expect("valid ids");
    let mut div = tol_div.max(1);
    let mut detail = String::new();
    let mut pair = None;
    for attempt in 1..=MAX_RETRIES + 1 {
        let tols = disk_tolerances(disks, &pairs, div);
        let regions: Result<Vec<GeodesicDisk>, GeodesicError> =
            disks.iter().zip(&tols).map(|((c, r), t)| geodisk_region(c, r, gp, t)).collect();
        match regions {
            Err(e @ GeodesicError::Region(_)) => detail = e.to_string(),
            Err(e) => return Err(e),
            Ok(regions) => {
                let rings: Vec<Vec<Point>> = regions.iter().map(|d| d.boundary_approx.clone()).collect();
                let res = pseudodisk_separator_weighted(&rings, &|_| 1, true)?;
                match audit(&g, &res.separator, &|_| 1) {
                    Ok(()) => return Ok(GeodesicSeparation { separator: res.separator, regions, tol_div: div, attempts: attempt }),
                    Err(e) => {
                        pair = crossing_pair(&g, &res.separator);
                        detail = e;
                    }
                }
            }
        }
        div *= 2;
    }
    Err(GeodesicError::RetriesExhausted { attempts: MAX_RETRIES + 1, detail, pair })
}

fn crossing_pair(g: &Graph, s: &CliqueSeparator) -> Option<(usize, usize)> {
    let mut side = vec![0u8; g.n()];
    s.a.iter().for_each(|&v| side[v] = 1);
    s.b.iter().for_each(|&v| side[v] = 2);
    g.edges().into_iter().find(|&(u, v)| side[u] * side[v] == 2)
}

/// Number of connected pieces of the closed intersection of two regions.
pub fn intersection_components(a: &[Point], b: &[Point]) -> Result<usize, GeomError> {
    let arr = Arrangement::build(&[a.to_vec(), b.to_vec()])?;
    let nv = arr.vertices.len();
    let mut uf = UnionFind::new(nv);
    let mut used = vec![false; nv];
    for (e, &(u, v)) in arr.edge_ends.iter().enumerate() {
        let covers = |o: usize| {
            arr.edge_owners[e].contains(&o) || (0..2).any(|k| arr.faces[arr.face_of[2 * e + k]].containing.contains(&o))
        };
        if covers(0) && covers(1) {
            used[u] = true;
            used[v] = true;
            uf.union(u, v);
        }
    }
    for (v, flag) in used.iter_mut().enumerate() {
        if arr.vertex_objects(v).len() == 2 {
            *flag = true;
        }
    }
    let mut roots: Vec<usize> = (0..nv).filter(|&v| used[v]).map(|v| uf.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_geodisks, random_simple_polygon, rng};
    use rand::Rng;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn l_shape() -> GeodesicPolygon {
        GeodesicPolygon::new(vec![p(0, 0), p(10, 0), p(10, 4), p(4, 4), p(4, 10), p(0, 10)]).unwrap()
    }

    #[test]
    fn convex_path_is_a_segment() {
        let gp = GeodesicPolygon::new(vec![p(0, 0), p(10, 0), p(12, 7), p(3, 9)]).unwrap();
        let path = gp.path(&p(1, 1), &p(10, 5)).unwrap();
        assert_eq!(path.points, vec![p(1, 1), p(10, 5)]);
        assert_eq!(path.sq, vec![Coord::from_int(97)]);
        let z = gp.path(&p(3, 3), &p(3, 3)).unwrap();
        assert_eq!(z.points.len(), 1);
        assert_eq!(z.length(), 0.0);
    }

    #[test]
    fn l_shape_bends_at_reflex_vertex() {
        let gp = l_shape();
        let path = gp.path(&p(9, 1), &p(1, 9)).unwrap();
        assert_eq!(path.points, vec![p(9, 1), p(4, 4), p(1, 9)]);
        let expect = (25f64 + 9.0).sqrt() + (9f64 + 25.0).sqrt();
        assert!((path.length() - expect).abs() < 1e-12);
        assert_eq!(gp.path_dijkstra(&p(9, 1), &p(1, 9)).unwrap(), path);
        assert!(gp.path(&p(11, 11), &p(1, 1)).is_err());
    }

    #[test]
    fn length_comparisons() {
        let gp = l_shape();
        let path = gp.path(&p(9, 1), &p(1, 9)).unwrap();
        assert_eq!(path.cmp_length(&Coord::from_int(12)), Ordering::Less);
        assert_eq!(path.cmp_length(&Coord::from_int(11)), Ordering::Greater);
        let seg = gp.path(&p(0, 0), &p(3, 4)).unwrap();
        assert_eq!(seg.cmp_length(&Coord::from_int(5)), Ordering::Equal);
        assert_eq!(seg.cmp_length(&Coord::from_ratio(49999, 10000)), Ordering::Greater);
    }

    #[test]
    fn funnel_matches_dijkstra_on_random_polygons() {
        let mut r = rng(3);
        for seed in 0..8 {
            let gp = GeodesicPolygon::new(random_simple_polygon(30, seed)).unwrap();
            let pts: Vec<Point> = random_geodisks(&gp, 12, 1, 2, seed).into_iter().map(|d| d.0).collect();
            for _ in 0..30 {
                let (a, b) = (&pts[r.gen_range(0..pts.len())], &pts[r.gen_range(0..pts.len())]);
                assert_eq!(gp.path(a, b).unwrap(), gp.path_dijkstra(a, b).unwrap());
            }
            for v in 0..gp.ring().len() {
                let a = &pts[v % pts.len()];
                assert_eq!(gp.path(a, &gp.ring()[v]).unwrap(), gp.path_dijkstra(a, &gp.ring()[v]).unwrap());
            }
        }
    }

    #[test]
    fn bends_are_reflex_and_triangle_inequality_holds() {
        let mut r = rng(4);
        let gp = GeodesicPolygon::new(random_simple_polygon(36, 11)).unwrap();
        let pts: Vec<Point> = random_geodisks(&gp, 20, 1, 2, 5).into_iter().map(|d| d.0).collect();
        for _ in 0..60 {
            let (a, b, c) = (&pts[r.gen_range(0..20)], &pts[r.gen_range(0..20)], &pts[r.gen_range(0..20)]);
            let ab = gp.path(a, b).unwrap();
            for bend in ab.bends() {
                let i = gp.ring().iter().position(|v| v == bend).expect("bend at a vertex");
                assert!(gp.is_reflex(i));
            }
            let (dab, dbc, dac) = (ab.length(), gp.path(b, c).unwrap().length(), gp.path(a, c).unwrap().length());
            assert!(dac <= dab + dbc + 1e-9);
        }
    }

    #[test]
    fn convex_graph_is_euclidean() {
        let gp = GeodesicPolygon::new(vec![p(0, 0), p(100, 0), p(100, 100), p(0, 100)]).unwrap();
        let mut r = rng(2);
        let disks: Vec<(Point, Coord)> =
            (0..25).map(|_| (p(r.gen_range(1..100), r.gen_range(1..100)), Coord::from_int(r.gen_range(3..15)))).collect();
        let g = geodisk_graph(&disks, &gp).unwrap();
        for i in 0..25 {
            for j in i + 1..25 {
                let s = disks[i].1.clone() + disks[j].1.clone();
                assert_eq!(g.has_edge(i, j), dist2(&disks[i].0, &disks[j].0) <= s.clone() * s);
            }
        }
    }

    #[test]
    fn corridor_blocks_intersection() {
        // U-shape: the two arms are close in the plane but far apart geodesically.
        let gp = GeodesicPolygon::new(vec![p(0, 0), p(30, 0), p(30, 100), p(20, 100), p(20, 10), p(10, 10), p(10, 100), p(0, 100)]).unwrap();
        let disks = vec![(p(5, 90), Coord::from_int(8)), (p(25, 90), Coord::from_int(8))];
        assert_eq!(geodisk_graph(&disks, &gp).unwrap().m(), 0);
    }

    #[test]
    fn convex_region_approximates_circle() {
        let gp = GeodesicPolygon::new(vec![p(0, 0), p(1000, 0), p(1000, 1000), p(0, 1000)]).unwrap();
        let r = Coord::from_int(200);
        let tol = Coord::from_int(200) / Coord::from_int(64);
        let d = geodisk_region(&p(500, 500), &r, &gp, &tol).unwrap();
        let area = crate::geom::polygon::approx_area(&d.boundary_approx);
        let full = std::f64::consts::PI * 200.0 * 200.0;
        let band = 2.0 * std::f64::consts::PI * 200.0 * tol.to_f64();
        assert!(area <= full && area >= full - band, "area {}", area);
        assert!(d.boundary_approx.len() >= 16);
        audit_region(&gp, &d).unwrap();
    }

    #[test]
    fn huge_radius_gives_polygon() {
        let gp = l_shape();
        let d = geodisk_region(&p(9, 1), &Coord::from_int(1000), &gp, &Coord::from_int(1)).unwrap();
        let mut got = d.boundary_approx.clone();
        let mut want = gp.ring().to_vec();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn disk_around_reflex_vertex() {
        let gp = GeodesicPolygon::new(vec![p(0, 0), p(1000, 0), p(1000, 400), p(400, 400), p(400, 1000), p(0, 1000)]).unwrap();
        let c = p(700, 200);
        let r = Coord::from_int(500);
        let d = geodisk_region(&c, &r, &gp, &Coord::from_ratio(500, 64)).unwrap();
        audit_region(&gp, &d).unwrap();
        // Part of the region lies behind the reflex vertex, reached only by bending there.
        let behind = d.boundary_approx.iter().any(|v| {
            let path = gp.path(&c, v).unwrap();
            path.bends() == [p(400, 400)]
        });
        assert!(behind);
    }

    #[test]
    fn random_regions_pass_audit() {
        for seed in 0..3 {
            let gp = GeodesicPolygon::new(random_simple_polygon(24, seed)).unwrap();
            for (c, r) in random_geodisks(&gp, 6, 1, 4, seed) {
                let d = geodisk_region(&c, &r, &gp, &(r.clone() / Coord::from_int(64))).unwrap();
                audit_region(&gp, &d).unwrap();
            }
        }
    }

    #[test]
    fn separator_examples() {
        let gp = GeodesicPolygon::new(vec![p(0, 0), p(1000, 0), p(1000, 1000), p(0, 1000)]).unwrap();
        let apart: Vec<(Point, Coord)> = (0..5).map(|i| (p(100 + 200 * i, 500), Coord::from_int(50))).collect();
        let s = geodisk_separator(&apart, &gp).unwrap();
        assert!(s.separator.cliques.is_empty());
        let common: Vec<(Point, Coord)> = (0..6).map(|i| (p(450 + 20 * i, 500), Coord::from_int(300))).collect();
        let s = geodisk_separator(&common, &gp).unwrap();
        assert_eq!(s.separator.cliques.len(), 1);
        assert!(geodisk_separator(&[], &gp).unwrap().separator.cliques.is_empty());
    }

    #[test]
    fn random_separator_is_valid() {
        let gp = GeodesicPolygon::new(random_simple_polygon(30, 7)).unwrap();
        let disks = random_geodisks(&gp, 60, 1, 3, 7);
        let g = geodisk_graph(&disks, &gp).unwrap();
        let s = geodisk_separator(&disks, &gp).unwrap();
        audit(&g, &s.separator, &|_| 1).unwrap();
        for (i, j) in g.edges() {
            let k = intersection_components(&s.regions[i].boundary_approx, &s.regions[j].boundary_approx).unwrap();
            assert_eq!(k, 1, "disks {} {}", i, j);
        }
    }

    #[test]
    fn intersection_component_counts() {
        let sq = |x: i64, y: i64, s: i64| vec![p(x, y), p(x + s, y), p(x + s, y + s), p(x, y + s)];
        assert_eq!(intersection_components(&sq(0, 0, 4), &sq(2, 2, 4)).unwrap(), 1);
        assert_eq!(intersection_components(&sq(0, 0, 4), &sq(4, 4, 4)).unwrap(), 1);
        assert_eq!(intersection_components(&sq(0, 0, 4), &sq(9, 9, 4)).unwrap(), 0);
        let u = vec![p(0, 0), p(10, 0), p(10, 10), p(8, 10), p(8, 2), p(2, 2), p(2, 10), p(0, 10)];
        assert_eq!(intersection_components(&u, &[p(-1, 5), p(11, 5), p(11, 7), p(-1, 7)]).unwrap(), 2);
    }
}
