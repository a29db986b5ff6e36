use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;

use super::Coord;

const EPS: f64 = f64::EPSILON;

/// Exact point with a cached float approximation used only to filter signs.
#[derive(Clone)]
pub struct Point {
    x: Coord,
    y: Coord,
    fx: f64,
    fy: f64,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        let fx = x.to_f64();
        let fy = y.to_f64();
        Point { x, y, fx, fy }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Coord::from_int(x), Coord::from_int(y))
    }

    pub fn origin() -> Self {
        Point::from_ints(0, 0)
    }

    pub fn x(&self) -> &Coord {
        &self.x
    }

    pub fn y(&self) -> &Coord {
        &self.y
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.fx, self.fy)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, k: &Coord) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        Point::new((&self.x + &o.x).half(), (&self.y + &o.y).half())
    }

    /// `self + t * (o - self)`.
    pub fn lerp(&self, o: &Point, t: &Coord) -> Point {
        Point::new(
            &self.x + &(t * &(&o.x - &self.x)),
            &self.y + &(t * &(&o.y - &self.y)),
        )
    }

    pub fn dot(&self, o: &Point) -> Coord {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> Coord {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn rot90(&self) -> Point {
        Point::new(-&self.y, self.x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl PartialEq for Point {
    fn eq(&self, o: &Self) -> bool {
        self.x == o.x && self.y == o.y
    }
}

impl Eq for Point {}

/// Hashes the float approximations, which are a function of the exact value.
impl Hash for Point {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.fx.to_bits().hash(h);
        self.fy.to_bits().hash(h);
    }
}

/// Lexicographic by x then y.
impl Ord for Point {
    fn cmp(&self, o: &Self) -> Ordering {
        cmp_filtered(&self.x, self.fx, &o.x, o.fx).then_with(|| cmp_filtered(&self.y, self.fy, &o.y, o.fy))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn cmp_x(&self, o: &Point) -> Ordering {
        cmp_filtered(&self.x, self.fx, &o.x, o.fx)
    }

    pub fn cmp_y(&self, o: &Point) -> Ordering {
        cmp_filtered(&self.y, self.fy, &o.y, o.fy)
    }
}

fn cmp_filtered(a: &Coord, fa: f64, b: &Coord, fb: f64) -> Ordering {
    if fa.is_finite() && fb.is_finite() {
        let slack = 4.0 * EPS * (fa.abs() + fb.abs());
        if fa - fb > slack {
            return Ordering::Greater;
        }
        if fb - fa > slack {
            return Ordering::Less;
        }
    }
    a.cmp(b)
}

/// Sign of `(b - a) x (c - a)`: +1 counterclockwise, -1 clockwise, 0 collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    if same_approx(a, b) && a == b || same_approx(a, c) && a == c || same_approx(b, c) && b == c {
        return 0;
    }
    let (ax, ay) = (a.fx, a.fy);
    let (bx, by) = (b.fx, b.fy);
    let (cx, cy) = (c.fx, c.fy);
    let det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    if det.is_finite() {
        let t1 = (bx.abs() + ax.abs()) * (cy.abs() + ay.abs());
        let t2 = (by.abs() + ay.abs()) * (cx.abs() + ax.abs());
        let bound = 16.0 * EPS * (t1 + t2);
        if det > bound {
            return 1;
        }
        if det < -bound {
            return -1;
        }
    }
    orient_exact(a, b, c)
}

fn same_approx(a: &Point, b: &Point) -> bool {
    a.fx == b.fx && a.fy == b.fy
}

/// Exact orientation by cross-multiplying numerators and denominators (no gcd reductions).
fn orient_exact(a: &Point, b: &Point, c: &Point) -> i32 {
    let diff = |p: &Coord, q: &Coord| -> (BigInt, BigInt) {
        if p.denom() == q.denom() {
            (p.numer() - q.numer(), p.denom().clone())
        } else {
            (p.numer() * q.denom() - q.numer() * p.denom(), p.denom() * q.denom())
        }
    };
    let (x1, d1) = diff(&b.x, &a.x);
    let (y2, d2) = diff(&c.y, &a.y);
    let (y1, d3) = diff(&b.y, &a.y);
    let (x2, d4) = diff(&c.x, &a.x);
    let lhs = x1 * y2 * (d3 * d4);
    let rhs = y1 * x2 * (d1 * d2);
    match lhs.cmp(&rhs) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

/// Sign of the cross product of two direction vectors `u x v`.
pub fn cross_sign(u: &Point, v: &Point) -> i32 {
    let det = u.fx * v.fy - u.fy * v.fx;
    if det.is_finite() {
        let bound = 8.0 * EPS * (u.fx.abs() * v.fy.abs() + u.fy.abs() * v.fx.abs());
        if det > bound {
            return 1;
        }
        if det < -bound {
            return -1;
        }
    }
    u.cross(v).signum()
}

/// Sign of the dot product `u . v`.
pub fn dot_sign(u: &Point, v: &Point) -> i32 {
    let d = u.fx * v.fx + u.fy * v.fy;
    if d.is_finite() {
        let bound = 8.0 * EPS * (u.fx.abs() * v.fx.abs() + u.fy.abs() * v.fy.abs());
        if d > bound {
            return 1;
        }
        if d < -bound {
            return -1;
        }
    }
    u.dot(v).signum()
}

pub fn dist2(a: &Point, b: &Point) -> Coord {
    let dx = &a.x - &b.x;
    let dy = &a.y - &b.y;
    &dx * &dx + &dy * &dy
}

/// Compares `|ab|^2` against `r2` exactly, with a float shortcut for clear cases.
pub fn cmp_dist2(a: &Point, b: &Point, r2: &Coord) -> Ordering {
    let dx = a.fx - b.fx;
    let dy = a.fy - b.fy;
    let d = dx * dx + dy * dy;
    let r = r2.to_f64();
    if d.is_finite() && r.is_finite() {
        let scale = a.fx.abs() + b.fx.abs() + a.fy.abs() + b.fy.abs();
        let slack = 16.0 * EPS * (scale * scale + r.abs());
        if d > r + slack {
            return Ordering::Greater;
        }
        if d < r - slack {
            return Ordering::Less;
        }
    }
    dist2(a, b).cmp(r2)
}

pub fn approx_dist(a: &Point, b: &Point) -> f64 {
    ((a.fx - b.fx).powi(2) + (a.fy - b.fy).powi(2)).sqrt()
}

/// Half-plane index for angular sorting: 0 for angles in [0, pi), 1 for [pi, 2pi).
fn half(d: &Point) -> u8 {
    let sy = d.y.signum();
    if sy > 0 || (sy == 0 && d.x.signum() > 0) {
        0
    } else {
        1
    }
}

/// Counterclockwise angular order of nonzero direction vectors starting at the +x axis.
pub fn angle_cmp(u: &Point, v: &Point) -> Ordering {
    let (hu, hv) = (half(u), half(v));
    if hu != hv {
        return hu.cmp(&hv);
    }
    match cross_sign(u, v) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// True if `v` lies strictly inside the counterclockwise sweep from `from` to `to`.
/// When `from` and `to` point the same way the sweep is the full turn minus that ray.
pub fn strictly_ccw_between(from: &Point, to: &Point, v: &Point) -> bool {
    let rv = relative(from, v);
    if is_zero_angle(&rv) {
        return false;
    }
    let rt = relative(from, to);
    if is_zero_angle(&rt) {
        return true;
    }
    angle_cmp(&rv, &rt) == Ordering::Less
}

/// `v` expressed in the frame whose +x axis is `from`.
fn relative(from: &Point, v: &Point) -> Point {
    Point::new(from.dot(v), from.cross(v))
}

fn is_zero_angle(d: &Point) -> bool {
    d.y().is_zero() && d.x().signum() > 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(2, 2)), 0);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 0)), -1);
    }

    #[test]
    fn orient_near_degenerate_falls_back_to_exact() {
        let big = 1i64 << 52;
        let a = p(big, big);
        let b = p(big + 1, big + 1);
        let c = p(big + 2, big + 2);
        assert_eq!(orient(&a, &b, &c), 0);
        let c2 = Point::new(Coord::from_int(big + 2), Coord::from_int(big + 2) + Coord::from_ratio(1, 1 << 40));
        assert_eq!(orient(&a, &b, &c2), 1);
    }

    #[test]
    fn orient_antisymmetric() {
        let pts = [p(3, 7), p(-2, 5), p(11, -4), p(0, 0), p(6, 14)];
        for a in &pts {
            for b in &pts {
                for c in &pts {
                    assert_eq!(orient(a, b, c), -orient(b, a, c));
                    assert_eq!(orient(a, b, c), orient(b, c, a));
                }
            }
        }
    }

    #[test]
    fn angular_order() {
        let mut dirs = vec![p(0, -1), p(-1, 0), p(1, 1), p(1, 0), p(0, 1), p(-1, -1)];
        dirs.sort_by(angle_cmp);
        assert_eq!(dirs, vec![p(1, 0), p(1, 1), p(0, 1), p(-1, 0), p(-1, -1), p(0, -1)]);
    }

    #[test]
    fn ccw_between() {
        assert!(strictly_ccw_between(&p(1, 0), &p(0, 1), &p(1, 1)));
        assert!(!strictly_ccw_between(&p(1, 0), &p(0, 1), &p(1, -1)));
        assert!(strictly_ccw_between(&p(0, 1), &p(1, 0), &p(-1, 0)));
        assert!(strictly_ccw_between(&p(1, 0), &p(1, 0), &p(-1, 0)));
        assert!(!strictly_ccw_between(&p(1, 0), &p(0, 1), &p(0, 1)));
    }
}
