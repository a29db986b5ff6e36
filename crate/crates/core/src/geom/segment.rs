use std::cmp::Ordering;

use super::{orient, Coord, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegIntersection {
    Empty,
    Point(Point),
    Overlap(Point, Point),
}

/// Axis and direction used to order collinear points along `a -> b`.
fn axis(a: &Point, b: &Point) -> (bool, bool) {
    let ((ax, ay), (bx, by)) = (a.approx(), b.approx());
    let (dx, dy) = ((bx - ax).abs(), (by - ay).abs());
    let slack = 1e-12 * (ax.abs() + ay.abs() + bx.abs() + by.abs());
    let use_x = if dx > dy + slack {
        true
    } else if dy > dx + slack {
        false
    } else {
        (b.x() - a.x()).abs() >= (b.y() - a.y()).abs()
    };
    let forward = if use_x { a.cmp_x(b) != Ordering::Greater } else { a.cmp_y(b) != Ordering::Greater };
    (use_x, forward)
}

fn cmp_on_axis(ax: (bool, bool), p: &Point, q: &Point) -> Ordering {
    let o = if ax.0 { p.cmp_x(q) } else { p.cmp_y(q) };
    if ax.1 {
        o
    } else {
        o.reverse()
    }
}

/// Orders points known to be collinear with segment `a b` along `a -> b`.
pub fn cmp_along(a: &Point, b: &Point, p: &Point, q: &Point) -> Ordering {
    cmp_on_axis(axis(a, b), p, q)
}

/// Sorts points collinear with `a b` along `a -> b`.
pub fn sort_along(a: &Point, b: &Point, pts: &mut [Point]) {
    let ax = axis(a, b);
    pts.sort_by(|p, q| cmp_on_axis(ax, p, q));
}

/// Closed bounding-box test for a point assumed collinear with `a b`.
fn within_box(a: &Point, b: &Point, p: &Point) -> bool {
    let (lx, hx) = if a.cmp_x(b) != Ordering::Greater { (a, b) } else { (b, a) };
    let (ly, hy) = if a.cmp_y(b) != Ordering::Greater { (a, b) } else { (b, a) };
    p.cmp_x(lx) != Ordering::Less
        && p.cmp_x(hx) != Ordering::Greater
        && p.cmp_y(ly) != Ordering::Less
        && p.cmp_y(hy) != Ordering::Greater
}

pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p) == 0 && within_box(a, b, p)
}

/// Intersection of lines `a b` and `c d`; `None` when parallel.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let r = b.sub(a);
    let s = d.sub(c);
    let den = r.cross(&s);
    if den.is_zero() {
        return None;
    }
    let t = c.sub(a).cross(&s) / den;
    Some(a.lerp(b, &t))
}

pub fn seg_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> SegIntersection {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0 {
        return collinear_overlap(a, b, c, d);
    }
    if d1 * d2 > 0 || d3 * d4 > 0 {
        return SegIntersection::Empty;
    }
    if d1 == 0 {
        return if within_box(c, d, a) { SegIntersection::Point(a.clone()) } else { SegIntersection::Empty };
    }
    if d2 == 0 {
        return if within_box(c, d, b) { SegIntersection::Point(b.clone()) } else { SegIntersection::Empty };
    }
    if d3 == 0 {
        return if within_box(a, b, c) { SegIntersection::Point(c.clone()) } else { SegIntersection::Empty };
    }
    if d4 == 0 {
        return if within_box(a, b, d) { SegIntersection::Point(d.clone()) } else { SegIntersection::Empty };
    }
    SegIntersection::Point(line_intersection(a, b, c, d).expect("non-parallel by orientation"))
}

fn collinear_overlap(a: &Point, b: &Point, c: &Point, d: &Point) -> SegIntersection {
    let ax = axis(a, b);
    let key = |p: &Point, q: &Point| cmp_on_axis(ax, p, q);
    let (a, b) = if key(a, b) == Ordering::Greater { (b, a) } else { (a, b) };
    let (c, d) = if key(c, d) != Ordering::Greater { (c, d) } else { (d, c) };
    let lo = if key(a, c) != Ordering::Less { a } else { c };
    let hi = if key(b, d) != Ordering::Greater { b } else { d };
    match key(lo, hi) {
        Ordering::Greater => SegIntersection::Empty,
        Ordering::Equal => SegIntersection::Point(lo.clone()),
        Ordering::Less => SegIntersection::Overlap(lo.clone(), hi.clone()),
    }
}

/// Interiors cross at a single point that is interior to both segments.
pub fn properly_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    d1 * d2 < 0 && d3 * d4 < 0
}

/// Squared distance from `p` to the closed segment `a b`.
pub fn dist2_point_segment(p: &Point, a: &Point, b: &Point) -> Coord {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let len2 = ab.dot(&ab);
    if len2.is_zero() {
        return ap.dot(&ap);
    }
    let t = ap.dot(&ab);
    if t.signum() <= 0 {
        return ap.dot(&ap);
    }
    if t >= len2 {
        let bp = p.sub(b);
        return bp.dot(&bp);
    }
    let c = ab.cross(&ap);
    &(&c * &c) / &len2
}

/// Closest point of segment `a b` to `p`.
pub fn closest_point_on_segment(p: &Point, a: &Point, b: &Point) -> Point {
    let ab = b.sub(a);
    let len2 = ab.dot(&ab);
    if len2.is_zero() {
        return a.clone();
    }
    let t = p.sub(a).dot(&ab);
    if t.signum() <= 0 {
        return a.clone();
    }
    if t >= len2 {
        return b.clone();
    }
    a.lerp(b, &(t / len2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(seg_intersect(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)), SegIntersection::Point(p(1, 1)));
        assert_eq!(seg_intersect(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)), SegIntersection::Empty);
        assert_eq!(
            seg_intersect(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)),
            SegIntersection::Overlap(p(1, 0), p(2, 0))
        );
    }

    #[test]
    fn touching_and_reversed() {
        assert_eq!(seg_intersect(&p(0, 0), &p(2, 0), &p(2, 0), &p(3, 5)), SegIntersection::Point(p(2, 0)));
        assert_eq!(seg_intersect(&p(2, 0), &p(0, 0), &p(3, 0), &p(2, 0)), SegIntersection::Point(p(2, 0)));
        assert_eq!(seg_intersect(&p(0, 0), &p(4, 0), &p(2, 0), &p(2, 3)), SegIntersection::Point(p(2, 0)));
        assert_eq!(seg_intersect(&p(0, 0), &p(0, 4), &p(0, 3), &p(0, 1)), SegIntersection::Overlap(p(0, 1), p(0, 3)));
    }

    #[test]
    fn symmetric_on_grid() {
        let pts: Vec<Point> = (0..4).flat_map(|x| (0..3).map(move |y| p(x, y))).collect();
        for a in &pts {
            for b in &pts {
                if a == b {
                    continue;
                }
                for c in &pts {
                    for d in &pts {
                        if c == d {
                            continue;
                        }
                        let r1 = seg_intersect(a, b, c, d);
                        let r2 = seg_intersect(c, d, a, b);
                        match (&r1, &r2) {
                            (SegIntersection::Overlap(x1, y1), SegIntersection::Overlap(x2, y2)) => {
                                let mut s1 = [x1.clone(), y1.clone()];
                                let mut s2 = [x2.clone(), y2.clone()];
                                s1.sort();
                                s2.sort();
                                assert_eq!(s1, s2);
                            }
                            _ => assert_eq!(r1, r2),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn point_segment_distance() {
        assert_eq!(dist2_point_segment(&p(1, 1), &p(0, 0), &p(2, 0)), Coord::from_int(1));
        assert_eq!(dist2_point_segment(&p(3, 1), &p(0, 0), &p(2, 0)), Coord::from_int(2));
        assert_eq!(dist2_point_segment(&p(1, 1), &p(0, 0), &p(2, 2)), Coord::zero());
    }
}
