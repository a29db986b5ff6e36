use super::segment::{on_segment, seg_intersect, SegIntersection};
use super::{orient, Coord, GeomError, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Twice the signed area of a ring (positive when counterclockwise).
pub fn signed_area2(ring: &[Point]) -> Coord {
    let n = ring.len();
    let mut acc = Coord::zero();
    if n < 3 {
        return acc;
    }
    let o = &ring[0];
    for i in 1..n - 1 {
        acc = acc + ring[i].sub(o).cross(&ring[i + 1].sub(o));
    }
    acc
}

pub fn approx_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (x1, y1) = ring[i].approx();
        let (x2, y2) = ring[(i + 1) % n].approx();
        acc += x1 * y2 - x2 * y1;
    }
    acc / 2.0
}

pub fn ring_edges(ring: &[Point]) -> impl Iterator<Item = (&Point, &Point)> {
    let n = ring.len();
    (0..n).map(move |i| (&ring[i], &ring[(i + 1) % n]))
}

/// Removes consecutive duplicates and vertices collinear with both neighbours
/// when they lie between them.
pub fn simplify_ring(ring: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::with_capacity(ring.len());
    for p in ring {
        if pts.last() != Some(p) {
            pts.push(p.clone());
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    let mut changed = true;
    while changed && pts.len() > 3 {
        changed = false;
        let n = pts.len();
        for i in 0..n {
            let a = &pts[(i + n - 1) % n];
            let b = &pts[i];
            let c = &pts[(i + 1) % n];
            if orient(a, b, c) == 0 && on_segment(a, c, b) {
                pts.remove(i);
                changed = true;
                break;
            }
        }
    }
    pts
}

/// Boundary-inclusive point-in-ring test.
pub fn locate_in_ring(p: &Point, ring: &[Point]) -> Location {
    let mut inside = false;
    for (a, b) in ring_edges(ring) {
        if on_segment(a, b, p) {
            return Location::Boundary;
        }
        if crosses_right(p, a, b) {
            inside = !inside;
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Half-open crossing rule for the ray from `p` towards +x.
fn crosses_right(p: &Point, a: &Point, b: &Point) -> bool {
    let ay = a.y() > p.y();
    let by = b.y() > p.y();
    if ay == by {
        return false;
    }
    if by {
        orient(a, b, p) > 0
    } else {
        orient(a, b, p) < 0
    }
}

/// Closed simple polygons intersect (boundaries meet or one contains the other).
pub fn rings_intersect(a: &[Point], b: &[Point]) -> bool {
    let (ba, bb) = (bbox(a), bbox(b));
    if ba.1.x() < bb.0.x() || bb.1.x() < ba.0.x() || ba.1.y() < bb.0.y() || bb.1.y() < ba.0.y() {
        return false;
    }
    for (p, q) in ring_edges(a) {
        for (u, v) in ring_edges(b) {
            if seg_intersect(p, q, u, v) != SegIntersection::Empty {
                return true;
            }
        }
    }
    locate_in_ring(&a[0], b) != Location::Outside || locate_in_ring(&b[0], a) != Location::Outside
}

/// Orientation sign of a simple ring, read off at its lexicographically smallest vertex.
pub fn ring_orientation(ring: &[Point]) -> i32 {
    let n = ring.len();
    if n < 3 {
        return 0;
    }
    let i = (0..n).min_by(|&a, &b| ring[a].cmp(&ring[b])).unwrap();
    orient(&ring[(i + n - 1) % n], &ring[i], &ring[(i + 1) % n])
}

pub fn is_simple_ring(ring: &[Point]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        if ring[i] == ring[(i + 1) % n] {
            return false;
        }
    }
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (&ring[j], &ring[(j + 1) % n]);
            let adjacent_next = j == i + 1;
            let adjacent_wrap = i == 0 && j == n - 1;
            match seg_intersect(a, b, c, d) {
                SegIntersection::Empty => {}
                SegIntersection::Point(x) => {
                    if adjacent_next && x == *b {
                        continue;
                    }
                    if adjacent_wrap && x == *a {
                        continue;
                    }
                    return false;
                }
                SegIntersection::Overlap(..) => return false,
            }
        }
    }
    ring_orientation(ring) != 0
}

/// Simple polygon with optional holes; outer ring counterclockwise, holes clockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonWithHoles {
    pub outer: Vec<Point>,
    pub holes: Vec<Vec<Point>>,
}

impl PolygonWithHoles {
    /// Validates and orients the rings.
    pub fn new(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<Self, GeomError> {
        let outer = orient_ring(outer, true)?;
        let holes = holes
            .into_iter()
            .map(|h| orient_ring(h, false))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, h) in holes.iter().enumerate() {
            for v in h {
                if locate_in_ring(v, &outer) != Location::Inside {
                    return Err(GeomError::InvalidPolygon(format!("hole {} not strictly inside outer ring", i)));
                }
            }
            if rings_touch(h, &outer) {
                return Err(GeomError::InvalidPolygon(format!("hole {} touches outer ring", i)));
            }
            for (j, g) in holes.iter().enumerate().skip(i + 1) {
                if rings_touch(h, g)
                    || locate_in_ring(&h[0], g) != Location::Outside
                    || locate_in_ring(&g[0], h) != Location::Outside
                {
                    return Err(GeomError::InvalidPolygon(format!("holes {} and {} overlap", i, j)));
                }
            }
        }
        Ok(PolygonWithHoles { outer, holes })
    }

    pub fn simple(outer: Vec<Point>) -> Result<Self, GeomError> {
        Self::new(outer, Vec::new())
    }

    pub fn rings(&self) -> impl Iterator<Item = &Vec<Point>> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn edges(&self) -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        for r in self.rings() {
            for (a, b) in ring_edges(r) {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.rings().map(|r| r.len()).sum()
    }

    /// Vertices whose interior angle exceeds pi (rings are oriented so the interior is on the left).
    pub fn reflex_vertices(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for r in self.rings() {
            let n = r.len();
            for i in 0..n {
                if orient(&r[(i + n - 1) % n], &r[i], &r[(i + 1) % n]) < 0 {
                    out.push(r[i].clone());
                }
            }
        }
        out
    }

    pub fn locate(&self, p: &Point) -> Location {
        match locate_in_ring(p, &self.outer) {
            Location::Outside => return Location::Outside,
            Location::Boundary => return Location::Boundary,
            Location::Inside => {}
        }
        for h in &self.holes {
            match locate_in_ring(p, h) {
                Location::Inside => return Location::Outside,
                Location::Boundary => return Location::Boundary,
                Location::Outside => {}
            }
        }
        Location::Inside
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox(&self.outer)
    }
}

pub fn point_in_polygon(p: &Point, poly: &PolygonWithHoles) -> Location {
    poly.locate(p)
}

pub fn bbox(pts: &[Point]) -> (Point, Point) {
    let mut lx = pts[0].x().clone();
    let mut hx = lx.clone();
    let mut ly = pts[0].y().clone();
    let mut hy = ly.clone();
    for p in &pts[1..] {
        if p.x() < &lx {
            lx = p.x().clone();
        }
        if p.x() > &hx {
            hx = p.x().clone();
        }
        if p.y() < &ly {
            ly = p.y().clone();
        }
        if p.y() > &hy {
            hy = p.y().clone();
        }
    }
    (Point::new(lx, ly), Point::new(hx, hy))
}

fn rings_touch(a: &[Point], b: &[Point]) -> bool {
    for (p, q) in ring_edges(a) {
        for (r, s) in ring_edges(b) {
            if seg_intersect(p, q, r, s) != SegIntersection::Empty {
                return true;
            }
        }
    }
    false
}

fn orient_ring(ring: Vec<Point>, ccw: bool) -> Result<Vec<Point>, GeomError> {
    let mut ring = ring;
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    if ring.len() < 3 {
        return Err(GeomError::InvalidPolygon("ring with fewer than 3 vertices".into()));
    }
    if !is_simple_ring(&ring) {
        return Err(GeomError::InvalidPolygon("ring is not simple".into()));
    }
    let s = ring_orientation(&ring);
    if (s > 0) != ccw {
        ring.reverse();
    }
    Ok(ring)
}

/// Simple polygonal region with an object id; boundary stored counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonalRegion {
    pub id: usize,
    pub boundary: Vec<Point>,
}

impl PolygonalRegion {
    pub fn new(id: usize, boundary: Vec<Point>) -> Result<Self, GeomError> {
        let boundary = orient_ring(boundary, true)?;
        Ok(PolygonalRegion { id, boundary })
    }

    /// Skips the simplicity check; orientation is still normalised.
    pub fn new_unchecked(id: usize, boundary: Vec<Point>) -> Self {
        let mut boundary = boundary;
        if ring_orientation(&boundary) < 0 {
            boundary.reverse();
        }
        PolygonalRegion { id, boundary }
    }

    pub fn locate(&self, p: &Point) -> Location {
        locate_in_ring(p, &self.boundary)
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox(&self.boundary)
    }

    /// A point strictly inside the region: centroid of an ear-clipping triangle.
    pub fn interior_point(&self) -> Point {
        interior_point(&self.boundary)
    }
}

pub fn interior_point(ring: &[Point]) -> Point {
    let mut s = simplify_ring(ring);
    if ring_orientation(&s) < 0 {
        s.reverse();
    }
    let (i, j, k) = first_ear(&s).unwrap_or_else(|| triangulate_ring(&s)[0]);
    let three = Coord::from_int(3);
    Point::new(
        (s[i].x() + s[j].x() + s[k].x()) / &three,
        (s[i].y() + s[j].y() + s[k].y()) / &three,
    )
}

/// A convex vertex whose triangle contains no other vertex, for a counterclockwise ring.
fn first_ear(s: &[Point]) -> Option<(usize, usize, usize)> {
    let n = s.len();
    if n < 3 {
        return None;
    }
    for j in 0..n {
        let (i, k) = ((j + n - 1) % n, (j + 1) % n);
        if orient(&s[i], &s[j], &s[k]) <= 0 {
            continue;
        }
        let blocked = (0..n).any(|t| {
            t != i
                && t != j
                && t != k
                && orient(&s[i], &s[j], &s[t]) >= 0
                && orient(&s[j], &s[k], &s[t]) >= 0
                && orient(&s[k], &s[i], &s[t]) >= 0
        });
        if !blocked {
            return Some((i, j, k));
        }
    }
    None
}

/// Ear-clipping triangulation of a simple counterclockwise ring after
/// [`simplify_ring`]; returned indices refer to the simplified ring.
pub fn triangulate_ring(ring: &[Point]) -> Vec<(usize, usize, usize)> {
    let pts = simplify_ring(ring);
    let n = pts.len();
    let mut idx: Vec<usize> = (0..n).collect();
    if ring_orientation(&pts) < 0 {
        idx.reverse();
    }
    let mut tris = Vec::with_capacity(n.saturating_sub(2));
    let mut strict = true;
    while idx.len() > 3 {
        let m = idx.len();
        let mut found = None;
        for t in 0..m {
            let (a, b, c) = (idx[(t + m - 1) % m], idx[t], idx[(t + 1) % m]);
            if orient(&pts[a], &pts[b], &pts[c]) <= 0 {
                continue;
            }
            let blocked = idx.iter().any(|&v| {
                if v == a || v == b || v == c {
                    return false;
                }
                let p = &pts[v];
                let (o1, o2, o3) = (orient(&pts[a], &pts[b], p), orient(&pts[b], &pts[c], p), orient(&pts[c], &pts[a], p));
                if strict {
                    o1 >= 0 && o2 >= 0 && o3 >= 0
                } else {
                    o1 > 0 && o2 > 0 && o3 > 0
                }
            });
            if !blocked {
                found = Some(t);
                break;
            }
        }
        match found {
            Some(t) => {
                let m = idx.len();
                tris.push((idx[(t + m - 1) % m], idx[t], idx[(t + 1) % m]));
                idx.remove(t);
                strict = true;
            }
            None if strict => strict = false,
            None => {
                // Degenerate input; clip the first convex-or-flat vertex to guarantee progress.
                let m = idx.len();
                tris.push((idx[m - 1], idx[0], idx[1]));
                idx.remove(0);
            }
        }
    }
    if idx.len() == 3 {
        tris.push((idx[0], idx[1], idx[2]));
    }
    tris
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn square() -> PolygonWithHoles {
        PolygonWithHoles::simple(vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)]).unwrap()
    }

    #[test]
    fn locate_examples() {
        let sq = square();
        assert_eq!(point_in_polygon(&p(2, 2), &sq), Location::Inside);
        assert_eq!(point_in_polygon(&p(4, 4), &sq), Location::Boundary);
        assert_eq!(point_in_polygon(&p(2, 0), &sq), Location::Boundary);
        assert_eq!(point_in_polygon(&p(5, 2), &sq), Location::Outside);
        let holed = PolygonWithHoles::new(
            vec![p(0, 0), p(10, 0), p(10, 10), p(0, 10)],
            vec![vec![p(4, 4), p(6, 4), p(6, 6), p(4, 6)]],
        )
        .unwrap();
        assert_eq!(holed.locate(&p(5, 5)), Location::Outside);
        assert_eq!(holed.locate(&p(4, 5)), Location::Boundary);
        assert_eq!(holed.locate(&p(2, 5)), Location::Inside);
        assert!(signed_area2(&holed.holes[0]).signum() < 0);
    }

    #[test]
    fn rejects_bad_polygons() {
        assert!(PolygonWithHoles::simple(vec![p(0, 0), p(1, 0)]).is_err());
        assert!(PolygonWithHoles::simple(vec![p(0, 0), p(2, 2), p(2, 0), p(0, 2)]).is_err());
        assert!(PolygonWithHoles::new(
            vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)],
            vec![vec![p(3, 1), p(5, 1), p(5, 2)]],
        )
        .is_err());
    }

    #[test]
    fn reflex_of_l_shape() {
        let l = PolygonWithHoles::simple(vec![p(0, 0), p(4, 0), p(4, 2), p(2, 2), p(2, 4), p(0, 4)]).unwrap();
        assert_eq!(l.reflex_vertices(), vec![p(2, 2)]);
    }

    #[test]
    fn ear_clipping_covers_area() {
        let ring = vec![p(0, 0), p(4, 0), p(4, 2), p(2, 2), p(2, 4), p(0, 4), p(0, 2)];
        let tris = triangulate_ring(&ring);
        let s = simplify_ring(&ring);
        assert_eq!(s.len(), 6);
        assert_eq!(tris.len(), 4);
        let mut total = Coord::zero();
        for (a, b, c) in tris {
            let t = signed_area2(&[s[a].clone(), s[b].clone(), s[c].clone()]);
            assert!(t.signum() > 0);
            total = total + t;
        }
        assert_eq!(total, signed_area2(&s));
        let ip = interior_point(&ring);
        assert_eq!(locate_in_ring(&ip, &ring), Location::Inside);
    }
}
