use std::cmp::Ordering;

use super::polygon::{locate_in_ring, simplify_ring, Location, PolygonWithHoles};
use super::segment::{cmp_along, line_intersection, on_segment, seg_intersect, SegIntersection};
use super::{angle_cmp, cross_sign, orient, strictly_ccw_between, Coord, GeomError, Point};

/// True iff the closed segment `pq` lies in the closed polygon.
pub fn sees(p: &Point, q: &Point, poly: &PolygonWithHoles) -> Result<bool, GeomError> {
    if poly.locate(p) == Location::Outside || poly.locate(q) == Location::Outside {
        return Err(GeomError::OutsidePolygon);
    }
    Ok(sees_unchecked(p, q, poly))
}

/// [`sees`] without the endpoint checks.
pub fn sees_unchecked(p: &Point, q: &Point, poly: &PolygonWithHoles) -> bool {
    if p == q {
        return true;
    }
    let mut cuts = vec![p.clone(), q.clone()];
    let mut touched = false;
    for r in poly.rings() {
        let n = r.len();
        for i in 0..n {
            let (a, b) = (&r[i], &r[(i + 1) % n]);
            match seg_intersect(p, q, a, b) {
                SegIntersection::Empty => {}
                SegIntersection::Point(x) => {
                    if x != *p && x != *q {
                        touched = true;
                        cuts.push(x);
                    }
                }
                SegIntersection::Overlap(x, y) => {
                    touched = true;
                    cuts.push(x);
                    cuts.push(y);
                }
            }
        }
    }
    if !touched {
        return poly.locate(&p.midpoint(q)) != Location::Outside;
    }
    cuts.sort_by(|u, v| cmp_along(p, q, u, v));
    cuts.dedup();
    cuts.windows(2).all(|w| poly.locate(&w[0].midpoint(&w[1])) != Location::Outside)
}

/// Where `p` sits on the boundary, as the open wedge of directions entering the interior.
enum Wedge {
    Full,
    /// Counterclockwise sweep from the first direction to the second.
    Corner(Point, Point),
    /// Open half-plane to the left of the direction.
    HalfPlane(Point),
}

impl Wedge {
    fn admits(&self, m: &Point) -> bool {
        match self {
            Wedge::Full => true,
            Wedge::Corner(a, b) => strictly_ccw_between(a, b, m),
            Wedge::HalfPlane(d) => cross_sign(d, m) > 0,
        }
    }
}

fn boundary_wedge(p: &Point, poly: &PolygonWithHoles) -> Wedge {
    for r in poly.rings() {
        let n = r.len();
        for i in 0..n {
            if r[i] == *p {
                let prev = &r[(i + n - 1) % n];
                let next = &r[(i + 1) % n];
                return Wedge::Corner(next.sub(p), prev.sub(p));
            }
        }
    }
    for r in poly.rings() {
        let n = r.len();
        for i in 0..n {
            let (a, b) = (&r[i], &r[(i + 1) % n]);
            if on_segment(a, b, p) {
                return Wedge::HalfPlane(b.sub(a));
            }
        }
    }
    Wedge::Full
}

/// Parameter `t` where the ray `p + t m` meets the line through `a b`.
fn ray_param(p: &Point, m: &Point, a: &Point, b: &Point) -> Coord {
    let e = b.sub(a);
    a.sub(p).cross(&e) / m.cross(&e)
}

/// The region visible from `p`, as a counterclockwise ring (`p` included when on the boundary).
pub fn visibility_polygon(p: &Point, poly: &PolygonWithHoles) -> Result<Vec<Point>, GeomError> {
    let loc = poly.locate(p);
    if loc == Location::Outside {
        return Err(GeomError::OutsidePolygon);
    }
    let wedge = if loc == Location::Boundary { boundary_wedge(p, poly) } else { Wedge::Full };
    let edges: Vec<(Point, Point)> = poly.edges().into_iter().filter(|(a, b)| !on_segment(a, b, p)).collect();

    let mut dirs: Vec<Point> = poly.rings().flat_map(|r| r.iter()).filter(|w| *w != p).map(|w| w.sub(p)).collect();
    dirs.sort_by(angle_cmp);
    dirs.dedup_by(|a, b| angle_cmp(a, b) == Ordering::Equal);
    let k = dirs.len();

    let mut out: Vec<Point> = Vec::new();
    for i in 0..k {
        let d0 = &dirs[i];
        let d1 = &dirs[(i + 1) % k];
        let m = if k > 1 && cross_sign(d0, d1) > 0 { d0.add(d1) } else { d0.rot90() };
        if !wedge.admits(&m) {
            if out.last() != Some(p) {
                out.push(p.clone());
            }
            continue;
        }
        let q = p.add(&m);
        let mut best: Option<(Coord, usize)> = None;
        for (j, (a, b)) in edges.iter().enumerate() {
            let oa = orient(p, &q, a);
            let ob = orient(p, &q, b);
            if oa * ob >= 0 {
                continue;
            }
            let t = ray_param(p, &m, a, b);
            if t.signum() <= 0 {
                continue;
            }
            if best.as_ref().is_none_or(|(bt, _)| t < *bt) {
                best = Some((t, j));
            }
        }
        let (_, j) = best.ok_or(GeomError::Degenerate("visibility ray escaped the polygon".into()))?;
        let (a, b) = &edges[j];
        let h0 = line_intersection(p, &p.add(d0), a, b).ok_or(GeomError::Degenerate("parallel hit".into()))?;
        let h1 = line_intersection(p, &p.add(d1), a, b).ok_or(GeomError::Degenerate("parallel hit".into()))?;
        out.push(h0);
        out.push(h1);
    }
    let mut ring = simplify_ring(&out);
    if super::polygon::ring_orientation(&ring) < 0 {
        ring.reverse();
    }
    Ok(ring)
}

/// Closed parameter intervals `[t0, t1]` of the line `o + t d` that lie in a closed region
/// bounded by `edges` and classified by `locate`.
pub fn clip_line<F>(o: &Point, d: &Point, edges: &[(Point, Point)], locate: F) -> Vec<(Coord, Coord)>
where
    F: Fn(&Point) -> Location,
{
    let q = o.add(d);
    let dd = d.dot(d);
    let param = |x: &Point| x.sub(o).dot(d) / &dd;
    let mut ts: Vec<Coord> = Vec::new();
    for (a, b) in edges {
        let oa = orient(o, &q, a);
        let ob = orient(o, &q, b);
        if oa == 0 && ob == 0 {
            ts.push(param(a));
            ts.push(param(b));
        } else if oa == 0 {
            ts.push(param(a));
        } else if ob == 0 {
            ts.push(param(b));
        } else if oa * ob < 0 {
            if let Some(x) = line_intersection(o, &q, a, b) {
                ts.push(param(&x));
            }
        }
    }
    ts.sort();
    ts.dedup();
    let at = |t: &Coord| o.add(&d.scale(t));
    let mut out: Vec<(Coord, Coord)> = Vec::new();
    for (i, t) in ts.iter().enumerate() {
        let seg_in = i + 1 < ts.len() && locate(&at(&((t + &ts[i + 1]).half()))) != Location::Outside;
        let cur_open = out.last().is_some_and(|(_, hi)| hi == t);
        if seg_in {
            if cur_open {
                out.last_mut().unwrap().1 = ts[i + 1].clone();
            } else {
                out.push((t.clone(), ts[i + 1].clone()));
            }
        } else if !cur_open && locate(&at(t)) != Location::Outside {
            out.push((t.clone(), t.clone()));
        }
    }
    out
}

/// Line pieces inside a polygon with holes.
pub fn clip_line_polygon(o: &Point, d: &Point, poly: &PolygonWithHoles) -> Vec<(Coord, Coord)> {
    clip_line(o, d, &poly.edges(), |x| poly.locate(x))
}

/// Line pieces inside a single ring.
pub fn clip_line_ring(o: &Point, d: &Point, ring: &[Point]) -> Vec<(Coord, Coord)> {
    let n = ring.len();
    let edges: Vec<(Point, Point)> = (0..n).map(|i| (ring[i].clone(), ring[(i + 1) % n].clone())).collect();
    clip_line(o, d, &edges, |x| locate_in_ring(x, ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn l_shape() -> PolygonWithHoles {
        PolygonWithHoles::simple(vec![p(0, 0), p(8, 0), p(8, 4), p(4, 4), p(4, 8), p(0, 8)]).unwrap()
    }

    fn holed() -> PolygonWithHoles {
        PolygonWithHoles::new(
            vec![p(0, 0), p(10, 0), p(10, 10), p(0, 10)],
            vec![vec![p(4, 4), p(6, 4), p(6, 6), p(4, 6)]],
        )
        .unwrap()
    }

    #[test]
    fn sees_examples() {
        let sq = PolygonWithHoles::simple(vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)]).unwrap();
        assert!(sees(&p(1, 1), &p(3, 2), &sq).unwrap());
        assert!(sees(&p(0, 0), &p(4, 4), &sq).unwrap());
        assert!(sees(&p(1, 1), &p(1, 1), &sq).unwrap());
        let h = holed();
        assert!(!sees(&p(2, 5), &p(8, 5), &h).unwrap());
        assert!(sees(&p(2, 4), &p(8, 4), &h).unwrap());
        assert!(sees(&p(5, 1), &p(5, 3), &h).unwrap());
        assert!(sees(&p(5, 5), &p(1, 1), &h).is_err());
        let l = l_shape();
        assert!(!sees(&p(7, 3), &p(3, 7), &l).unwrap());
        assert!(sees(&p(6, 2), &p(2, 6), &l).unwrap());
        assert!(sees(&p(8, 4), &p(0, 4), &l).unwrap());
    }

    fn grid_audit(poly: &PolygonWithHoles, from: &Point, steps: i64, scale: i64) {
        let vis = visibility_polygon(from, poly).unwrap();
        for i in 0..=steps {
            for j in 0..=steps {
                let q = Point::new(Coord::from_ratio(i * scale, steps), Coord::from_ratio(j * scale, steps));
                if poly.locate(&q) == Location::Outside {
                    continue;
                }
                let direct = sees_unchecked(from, &q, poly);
                let via = locate_in_ring(&q, &vis) != Location::Outside;
                assert_eq!(direct, via, "mismatch at {:?} from {:?}", q, from);
            }
        }
    }

    #[test]
    fn visibility_polygon_matches_sees() {
        grid_audit(&l_shape(), &p(7, 1), 24, 8);
        grid_audit(&l_shape(), &p(4, 4), 24, 8);
        grid_audit(&l_shape(), &p(0, 0), 24, 8);
        grid_audit(&l_shape(), &p(6, 0), 24, 8);
        grid_audit(&holed(), &p(1, 2), 20, 10);
        grid_audit(&holed(), &p(4, 4), 20, 10);
        grid_audit(&holed(), &p(5, 2), 20, 10);
    }

    #[test]
    fn convex_visibility_is_whole_polygon() {
        let sq = PolygonWithHoles::simple(vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)]).unwrap();
        let v = visibility_polygon(&p(1, 3), &sq).unwrap();
        assert_eq!(super::super::polygon::signed_area2(&v), Coord::from_int(32));
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn sees_is_symmetric_on_random_pairs() {
        let poly = holed();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let a = Point::new(Coord::from_ratio(rng.gen_range(0..=100), 10), Coord::from_ratio(rng.gen_range(0..=100), 10));
            let b = Point::new(Coord::from_ratio(rng.gen_range(0..=100), 10), Coord::from_ratio(rng.gen_range(0..=100), 10));
            if poly.locate(&a) == Location::Outside || poly.locate(&b) == Location::Outside {
                continue;
            }
            assert_eq!(sees_unchecked(&a, &b, &poly), sees_unchecked(&b, &a, &poly));
        }
    }

    #[test]
    fn line_clipping_through_hole() {
        let h = holed();
        let pieces = clip_line_polygon(&p(0, 5), &p(1, 0), &h);
        assert_eq!(
            pieces,
            vec![(Coord::zero(), Coord::from_int(4)), (Coord::from_int(6), Coord::from_int(10))]
        );
        let along_edge = clip_line_polygon(&p(0, 4), &p(1, 0), &h);
        assert_eq!(along_edge, vec![(Coord::zero(), Coord::from_int(10))]);
        let corner = clip_line_polygon(&p(0, 20), &p(1, -1), &PolygonWithHoles::simple(vec![p(0, 0), p(10, 0), p(10, 10), p(0, 10)]).unwrap());
        assert_eq!(corner, vec![(Coord::from_int(10), Coord::from_int(10))]);
    }
}
