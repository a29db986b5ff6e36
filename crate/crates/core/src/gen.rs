//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spade::{DelaunayTriangulation, Point2, Triangulation};

use crate::geom::segment::line_intersection;
use crate::geom::{angle_cmp, orient, Coord, Point};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct integer points in `[0, side]^2`.
pub fn distinct_points(n: usize, side: i64, rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = (rng.gen_range(0..=side), rng.gen_range(0..=side));
        if seen.insert(p) {
            out.push(p);
        }
    }
    out
}

/// Keeps the part of `ring` on the closed left side of the directed line `a -> b`.
pub fn clip_halfplane(ring: &[Point], a: &Point, b: &Point) -> Vec<Point> {
    let m = ring.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let (p, q) = (&ring[i], &ring[(i + 1) % m]);
        let (sp, sq) = (orient(a, b, p), orient(a, b, q));
        if sp >= 0 {
            out.push(p.clone());
        }
        if sp * sq < 0 {
            out.push(line_intersection(p, q, a, b).expect("crossing edges"));
        }
    }
    out
}

/// Voronoi cells of `n` random sites clipped to the square `[0, side]^2`, as exact
/// rational rings. Adjacent cells share vertices exactly.
pub fn voronoi_map(n: usize, seed: u64) -> Vec<Vec<Point>> {
    let mut r = rng(seed);
    let side = 1_000_000i64;
    let sites = distinct_points(n, side, &mut r);
    voronoi_cells(&sites, side)
}

pub fn voronoi_cells(sites: &[(i64, i64)], side: i64) -> Vec<Vec<Point>> {
    let n = sites.len();
    let sq = vec![
        Point::from_ints(0, 0),
        Point::from_ints(side, 0),
        Point::from_ints(side, side),
        Point::from_ints(0, side),
    ];
    if n == 1 {
        return vec![sq];
    }
    // Frame sites at distance 3*side keep every real cell bounded without changing it
    // inside the box.
    let (lo, mid, hi) = (-3 * side, side / 2, 4 * side);
    let frame = [(lo, lo), (mid, lo), (hi, lo), (hi, mid), (hi, hi), (mid, hi), (lo, hi), (lo, mid)];
    let all: Vec<(i64, i64)> = sites.iter().copied().chain(frame).collect();
    let mut t: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    let mut site_of = std::collections::HashMap::new();
    for (i, &(x, y)) in all.iter().enumerate() {
        let h = t.insert(Point2::new(x as f64, y as f64)).expect("finite site");
        site_of.insert(h.index(), i);
    }
    let mut corners: Vec<Vec<Point>> = vec![Vec::new(); n];
    for f in t.inner_faces() {
        let ids = f.vertices().map(|v| site_of[&v.fix().index()]);
        let c = circumcenter(all[ids[0]], all[ids[1]], all[ids[2]]);
        for &i in &ids {
            if i < n {
                corners[i].push(c.clone());
            }
        }
    }
    corners
        .into_iter()
        .enumerate()
        .map(|(i, mut cs)| {
            let s = Point::from_ints(sites[i].0, sites[i].1);
            cs.sort_by(|a, b| angle_cmp(&a.sub(&s), &b.sub(&s)));
            cs.dedup();
            let mut ring = cs;
            for k in 0..4 {
                ring = clip_halfplane(&ring, &sq[k], &sq[(k + 1) % 4]);
            }
            crate::geom::polygon::simplify_ring(&ring)
        })
        .collect()
}

fn circumcenter(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Point {
    let (ax, ay, bx, by, cx, cy) = (a.0 as i128, a.1 as i128, b.0 as i128, b.1 as i128, c.0 as i128, c.1 as i128);
    let d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    let (a2, b2, c2) = (ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy);
    let ux = a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by);
    let uy = a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax);
    Point::new(
        Coord::from_big(BigInt::from(ux), BigInt::from(d)),
        Coord::from_big(BigInt::from(uy), BigInt::from(d)),
    )
}

/// `k x k` block of unit squares scaled by `unit`.
pub fn square_block(k: i64, unit: i64) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    for y in 0..k {
        for x in 0..k {
            let (x0, y0) = (x * unit, y * unit);
            out.push(vec![
                Point::from_ints(x0, y0),
                Point::from_ints(x0 + unit, y0),
                Point::from_ints(x0 + unit, y0 + unit),
                Point::from_ints(x0, y0 + unit),
            ]);
        }
    }
    out
}

/// Regular `k`-gon inscribed in the unit circle, vertices rounded toward the centre to
/// rationals with denominator `2^20`. Checked convex.
pub fn unit_polygon(k: usize) -> Vec<Point> {
    let den = 1i64 << 20;
    let ring: Vec<Point> = (0..k)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            let x = (a.cos() * den as f64).trunc() as i64;
            let y = (a.sin() * den as f64).trunc() as i64;
            Point::new(Coord::from_ratio(x, den), Coord::from_ratio(y, den))
        })
        .collect();
    let ring = crate::geom::polygon::simplify_ring(&ring);
    let m = ring.len();
    assert!((0..m).all(|i| orient(&ring[i], &ring[(i + 1) % m], &ring[(i + 2) % m]) > 0), "base polygon not convex");
    ring
}

/// Homothetic copy `centre + radius * unit_polygon(k)`; copies of one convex polygon
/// are pseudo-disks.
pub fn disk_polygon(cx: i64, cy: i64, radius: i64, k: usize) -> Vec<Point> {
    scaled_polygon(&unit_polygon(k), cx, cy, radius)
}

pub fn scaled_polygon(base: &[Point], cx: i64, cy: i64, radius: i64) -> Vec<Point> {
    let c = Point::from_ints(cx, cy);
    let r = Coord::from_int(radius);
    base.iter().map(|p| c.add(&p.scale(&r))).collect()
}

/// Random disks `(x, y, r)` at roughly constant density: centres in a square sized so that
/// the expected coverage is about `density`, radii in `[unit/2, unit]` with `unit = 1000`.
pub fn random_disks(n: usize, density: f64, seed: u64) -> Vec<(i64, i64, i64)> {
    let mut r = rng(seed);
    let unit = 1000i64;
    let mean_area = std::f64::consts::PI * (unit as f64).powi(2) * 7.0 / 12.0;
    let side = ((n as f64 * mean_area / density).sqrt().ceil() as i64).max(unit);
    (0..n).map(|_| (r.gen_range(0..=side), r.gen_range(0..=side), r.gen_range(unit / 2..=unit))).collect()
}

/// `k x k` grid of disks of radius 10 at spacing 19 (a grid graph).
pub fn disk_grid(k: usize) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for y in 0..k as i64 {
        for x in 0..k as i64 {
            out.push((19 * x, 19 * y, 10));
        }
    }
    out
}

pub fn disks_to_rings(disks: &[(i64, i64, i64)], k: usize) -> Vec<Vec<Point>> {
    let base = unit_polygon(k);
    disks.iter().map(|&(x, y, r)| scaled_polygon(&base, x, y, r)).collect()
}

/// Random star-shaped simple polygon with `k` vertices on a `[-10000, 10000]^2` scale:
/// sorted distinct angles, radii in `[3000, 10000]`, retried until simple.
pub fn random_simple_polygon(k: usize, seed: u64) -> Vec<Point> {
    let mut r = rng(seed);
    loop {
        let mut angles: Vec<f64> = (0..k).map(|_| r.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let ring: Vec<Point> = angles
            .iter()
            .map(|&a| {
                let rad = r.gen_range(3000.0..10000.0);
                Point::from_ints((rad * a.cos()).round() as i64, (rad * a.sin()).round() as i64)
            })
            .collect();
        let ring = crate::geom::polygon::simplify_ring(&ring);
        if ring.len() >= 3 && crate::geom::polygon::is_simple_ring(&ring) {
            return ring;
        }
    }
}

/// `n` disks with integer centres strictly inside the polygon and integer radii between
/// `lo_pct` and `hi_pct` percent of the bounding-box width.
pub fn random_geodisks(gp: &crate::geodesic::GeodesicPolygon, n: usize, lo_pct: i64, hi_pct: i64, seed: u64) -> Vec<(Point, Coord)> {
    let mut r = rng(seed);
    let (lo, hi) = crate::geom::polygon::bbox(gp.ring());
    let (x0, y0) = (lo.x().floor().to_i64().unwrap(), lo.y().floor().to_i64().unwrap());
    let (x1, y1) = (hi.x().floor().to_i64().unwrap(), hi.y().floor().to_i64().unwrap());
    let w = (x1 - x0).max(1);
    let (rlo, rhi) = ((w * lo_pct / 100).max(1), (w * hi_pct / 100).max(1));
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let c = Point::from_ints(r.gen_range(x0..=x1), r.gen_range(y0..=y1));
        if gp.poly.locate(&c) == crate::geom::Location::Inside {
            out.push((c, Coord::from_int(r.gen_range(rlo..=rhi))));
        }
    }
    out
}

/// `n` distinct points with coordinates in multiples of `1/1000`, strictly inside the
/// square `[0, ceil(sqrt(n))]^2`, which is the polygon.
pub fn uniform_square_instance(n: usize, seed: u64) -> crate::vis::VisInstance {
    let side = crate::vis::ceil_sqrt(n).max(1) as i64;
    let ring = vec![Point::from_ints(0, 0), Point::from_ints(side, 0), Point::from_ints(side, side), Point::from_ints(0, side)];
    let poly = crate::geom::PolygonWithHoles::simple(ring).expect("square");
    let mut r = rng(seed);
    let pts = distinct_points(n, side * 1000 - 2, &mut r);
    let points = pts.iter().map(|&(x, y)| Point::new(Coord::from_ratio(x + 1, 1000), Coord::from_ratio(y + 1, 1000))).collect();
    crate::vis::VisInstance::new(poly, points).expect("points inside the square")
}

/// Random star-shaped polygon of area about `n` with up to `holes` small square holes and
/// `n` points with coordinates in multiples of `1/1000`.
pub fn random_vis_instance(n: usize, holes: usize, seed: u64) -> crate::vis::VisInstance {
    use crate::geom::{Location, PolygonWithHoles};
    let scale = Coord::from_big(BigInt::from(((n.max(4) as f64).sqrt() * 1000.0) as i64), BigInt::from(12_500_000));
    let outer: Vec<Point> = random_simple_polygon(24, seed).iter().map(|p| p.scale(&scale)).collect();
    let mut r = rng(seed ^ 0x5eed);
    let mut poly = PolygonWithHoles::simple(outer.clone()).expect("simple outer ring");
    let (lo, hi) = poly.bbox();
    let (x0, y0) = ((lo.x().to_f64() * 1000.0).ceil() as i64, (lo.y().to_f64() * 1000.0).ceil() as i64);
    let (x1, y1) = ((hi.x().to_f64() * 1000.0).floor() as i64, (hi.y().to_f64() * 1000.0).floor() as i64);
    let milli = |v: i64| Coord::from_ratio(v, 1000);
    let mut hole_rings: Vec<Vec<Point>> = Vec::new();
    let mut tries = 0;
    while hole_rings.len() < holes && tries < 1000 {
        tries += 1;
        let (cx, cy) = (r.gen_range(x0..=x1), r.gen_range(y0..=y1));
        let h = r.gen_range(300..1200) / 2;
        let ring = vec![
            Point::new(milli(cx - h), milli(cy - h)),
            Point::new(milli(cx + h), milli(cy - h)),
            Point::new(milli(cx + h), milli(cy + h)),
            Point::new(milli(cx - h), milli(cy + h)),
        ];
        let mut trial = hole_rings.clone();
        trial.push(ring);
        if let Ok(p) = PolygonWithHoles::new(outer.clone(), trial.clone()) {
            poly = p;
            hole_rings = trial;
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let (x, y) = (r.gen_range(x0..=x1), r.gen_range(y0..=y1));
        let q = Point::new(milli(x), milli(y));
        if poly.locate(&q) == Location::Inside && seen.insert((x, y)) {
            points.push(q);
        }
    }
    crate::vis::VisInstance::new(poly, points).expect("points inside the polygon")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_sep::{build_map_graph, MapInstance};

    #[test]
    fn voronoi_is_a_valid_map() {
        for seed in 0..3 {
            let rings = voronoi_map(60, seed);
            assert_eq!(rings.len(), 60);
            let inst = MapInstance::new(rings).unwrap();
            let g = build_map_graph(&inst);
            assert_eq!(g.components().len(), 1);
            assert!(g.m() >= 60);
        }
    }

    #[test]
    fn voronoi_matches_bisector_clipping() {
        let mut r = rng(5);
        let side = 1000;
        let sites = distinct_points(25, side, &mut r);
        let cells = voronoi_cells(&sites, side);
        for (i, cell) in cells.iter().enumerate() {
            let s = Point::from_ints(sites[i].0, sites[i].1);
            let mut ring = vec![
                Point::from_ints(0, 0),
                Point::from_ints(side, 0),
                Point::from_ints(side, side),
                Point::from_ints(0, side),
            ];
            for (j, &(x, y)) in sites.iter().enumerate() {
                if j != i {
                    let o = Point::from_ints(x, y);
                    let mid = s.midpoint(&o);
                    ring = clip_halfplane(&ring, &mid, &mid.add(&o.sub(&s).rot90()));
                }
            }
            let mut expect = crate::geom::polygon::simplify_ring(&ring);
            let mut got = cell.clone();
            expect.sort();
            got.sort();
            assert_eq!(got, expect, "cell {}", i);
        }
    }

    #[test]
    fn voronoi_is_deterministic() {
        assert_eq!(voronoi_map(40, 9), voronoi_map(40, 9));
    }

    #[test]
    fn tiny_voronoi() {
        assert_eq!(voronoi_map(1, 0).len(), 1);
        let two = MapInstance::new(voronoi_map(2, 3)).unwrap();
        assert_eq!(build_map_graph(&two).m(), 1);
    }

    #[test]
    fn disk_polygon_is_inside_disk() {
        let p = disk_polygon(10, -4, 7, 64);
        assert_eq!(p.len(), 64);
        let c = Point::from_ints(10, -4);
        for v in &p {
            assert!(crate::geom::dist2(v, &c) <= Coord::from_int(49));
        }
    }
}
