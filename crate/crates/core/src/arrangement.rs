//! Overlay of polygon boundaries as a half-edge structure with per-face containing sets.

use std::collections::{HashMap, VecDeque};

use crate::geom::polygon::locate_in_ring;
use crate::geom::segment::{seg_intersect, sort_along, SegIntersection};
use crate::geom::{angle_cmp, Coord, GeomError, Location, Point};
use crate::planar::{PlaneGraph, PlanarError};

#[derive(Debug, Clone)]
pub struct Face {
    /// A half-edge on the outer boundary; `None` for the unbounded face.
    pub outer: Option<usize>,
    /// One half-edge per inner boundary cycle.
    pub holes: Vec<usize>,
    /// Objects whose interior contains this face, sorted.
    pub containing: Vec<usize>,
}

/// Half-edge `2e` runs along edge `e` from `edge_ends[e].0` to `edge_ends[e].1`;
/// `2e + 1` is its twin. Faces lie to the left of their half-edges.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub vertices: Vec<Point>,
    pub edge_ends: Vec<(usize, usize)>,
    /// Objects whose boundary contains each edge.
    pub edge_owners: Vec<Vec<usize>>,
    pub next: Vec<usize>,
    pub face_of: Vec<usize>,
    pub faces: Vec<Face>,
    pub unbounded: usize,
    /// Outgoing half-edges of each vertex in counterclockwise order.
    pub outgoing: Vec<Vec<usize>>,
    pub n_objects: usize,
}

fn fbox(a: &Point, b: &Point) -> [f64; 4] {
    let ((ax, ay), (bx, by)) = (a.approx(), b.approx());
    [ax.min(bx), ay.min(by), ax.max(bx), ay.max(by)]
}

/// Index pairs of boxes that may intersect (float boxes widened by a relative slack).
pub(crate) fn candidate_pairs(boxes: &[[f64; 4]]) -> Vec<(usize, usize)> {
    let scale = boxes.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    let slack = 1e-9 * scale;
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&i, &j| boxes[i][0].total_cmp(&boxes[j][0]).then(i.cmp(&j)));
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for &i in &order {
        let b = &boxes[i];
        active.retain(|&j| boxes[j][2] + slack >= b[0]);
        for &j in &active {
            let c = &boxes[j];
            if c[1] <= b[3] + slack && b[1] <= c[3] + slack {
                out.push((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    out
}

impl Arrangement {
    /// Builds the overlay of the given closed rings; ring `i` is object `i`.
    pub fn build(rings: &[Vec<Point>]) -> Result<Self, GeomError> {
        let mut segs: Vec<(Point, Point, usize)> = Vec::new();
        for (o, r) in rings.iter().enumerate() {
            let m = r.len();
            if m < 3 {
                return Err(GeomError::Degenerate(format!("object {} has fewer than 3 vertices", o)));
            }
            if crate::geom::polygon::ring_orientation(r) == 0 {
                return Err(GeomError::Degenerate(format!("object {} has zero area", o)));
            }
            for i in 0..m {
                let (a, b) = (&r[i], &r[(i + 1) % m]);
                if a != b {
                    segs.push((a.clone(), b.clone(), o));
                }
            }
        }
        let boxes: Vec<[f64; 4]> = segs.iter().map(|(a, b, _)| fbox(a, b)).collect();
        let mut cuts: Vec<Vec<Point>> = segs.iter().map(|(a, b, _)| vec![a.clone(), b.clone()]).collect();
        for (i, j) in candidate_pairs(&boxes) {
            let (a, b, _) = &segs[i];
            let (c, d, _) = &segs[j];
            match seg_intersect(a, b, c, d) {
                SegIntersection::Empty => {}
                SegIntersection::Point(x) => {
                    cuts[i].push(x.clone());
                    cuts[j].push(x);
                }
                SegIntersection::Overlap(x, y) => {
                    cuts[i].push(x.clone());
                    cuts[i].push(y.clone());
                    cuts[j].push(x);
                    cuts[j].push(y);
                }
            }
        }
        let mut vid: HashMap<Point, usize> = HashMap::new();
        let mut vertices: Vec<Point> = Vec::new();
        let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edge_ends: Vec<(usize, usize)> = Vec::new();
        let mut edge_owners: Vec<Vec<usize>> = Vec::new();
        for (s, mut cs) in segs.iter().zip(cuts) {
            sort_along(&s.0, &s.1, &mut cs);
            cs.dedup();
            let ids: Vec<usize> = cs
                .into_iter()
                .map(|p| {
                    let n = vertices.len();
                    *vid.entry(p.clone()).or_insert_with(|| {
                        vertices.push(p);
                        n
                    })
                })
                .collect();
            for w in ids.windows(2) {
                let key = (w[0].min(w[1]), w[0].max(w[1]));
                let e = *edge_id.entry(key).or_insert_with(|| {
                    edge_ends.push(key);
                    edge_owners.push(Vec::new());
                    edge_ends.len() - 1
                });
                if !edge_owners[e].contains(&s.2) {
                    edge_owners[e].push(s.2);
                }
            }
        }
        for o in &mut edge_owners {
            o.sort_unstable();
        }
        Self::from_edges(vertices, edge_ends, edge_owners, rings.len())
    }

    fn from_edges(
        vertices: Vec<Point>,
        edge_ends: Vec<(usize, usize)>,
        edge_owners: Vec<Vec<usize>>,
        n_objects: usize,
    ) -> Result<Self, GeomError> {
        let nv = vertices.len();
        let nh = 2 * edge_ends.len();
        let tail = |h: usize| if h.is_multiple_of(2) { edge_ends[h / 2].0 } else { edge_ends[h / 2].1 };
        let head = |h: usize| tail(h ^ 1);
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for h in 0..nh {
            outgoing[tail(h)].push(h);
        }
        let dirs: Vec<Point> = (0..nh).map(|h| vertices[head(h)].sub(&vertices[tail(h)])).collect();
        let mut pos = vec![0usize; nh];
        for out in &mut outgoing {
            out.sort_by(|&a, &b| angle_cmp(&dirs[a], &dirs[b]));
            for (i, &h) in out.iter().enumerate() {
                pos[h] = i;
            }
        }
        let mut next = vec![0usize; nh];
        for h in 0..nh {
            let t = h ^ 1;
            let out = &outgoing[tail(t)];
            let k = out.len();
            next[h] = out[(pos[t] + k - 1) % k];
        }
        // Boundary cycles.
        let mut cycle_of = vec![usize::MAX; nh];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for h0 in 0..nh {
            if cycle_of[h0] != usize::MAX {
                continue;
            }
            let c = cycles.len();
            let mut cyc = Vec::new();
            let mut h = h0;
            while cycle_of[h] == usize::MAX {
                cycle_of[h] = c;
                cyc.push(h);
                h = next[h];
            }
            cycles.push(cyc);
        }
        let area2: Vec<Coord> = cycles
            .iter()
            .map(|cyc| {
                let mut s = Coord::zero();
                for &h in cyc {
                    s = s + vertices[tail(h)].cross(&vertices[head(h)]);
                }
                s
            })
            .collect();
        let mut faces: Vec<Face> = Vec::new();
        let mut face_of_cycle = vec![usize::MAX; cycles.len()];
        for (c, cyc) in cycles.iter().enumerate() {
            if area2[c].signum() > 0 {
                face_of_cycle[c] = faces.len();
                faces.push(Face { outer: Some(cyc[0]), holes: Vec::new(), containing: Vec::new() });
            }
        }
        let unbounded = faces.len();
        faces.push(Face { outer: None, holes: Vec::new(), containing: Vec::new() });
        let rings: Vec<Vec<Point>> = cycles.iter().map(|cyc| cyc.iter().map(|&h| vertices[tail(h)].clone()).collect()).collect();
        let cboxes: Vec<[f64; 4]> = rings
            .iter()
            .map(|r| {
                let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
                for p in r {
                    let (x, y) = p.approx();
                    b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
                }
                b
            })
            .collect();
        let positive: Vec<usize> = (0..cycles.len()).filter(|&c| area2[c].signum() > 0).collect();
        for (c, cyc) in cycles.iter().enumerate() {
            if area2[c].signum() > 0 {
                continue;
            }
            let v = rings[c].iter().min().expect("nonempty cycle");
            let (vx, vy) = v.approx();
            let mut best: Option<usize> = None;
            for &p in &positive {
                let b = &cboxes[p];
                let slack = 1e-9 * (1.0 + vx.abs() + vy.abs());
                if vx < b[0] - slack || vx > b[2] + slack || vy < b[1] - slack || vy > b[3] + slack {
                    continue;
                }
                if best.is_some_and(|q| area2[p] >= area2[q]) {
                    continue;
                }
                if locate_in_ring(v, &rings[p]) == Location::Inside {
                    best = Some(p);
                }
            }
            let f = best.map_or(unbounded, |p| face_of_cycle[p]);
            face_of_cycle[c] = f;
            faces[f].holes.push(cyc[0]);
        }
        let mut face_of = vec![0usize; nh];
        for h in 0..nh {
            face_of[h] = face_of_cycle[cycle_of[h]];
        }
        let mut arr = Arrangement { vertices, edge_ends, edge_owners, next, face_of, faces, unbounded, outgoing, n_objects };
        arr.fill_containing();
        Ok(arr)
    }

    /// Containing sets by crossing edges from the unbounded face, toggling edge owners.
    fn fill_containing(&mut self) {
        let nf = self.faces.len();
        let mut seen = vec![false; nf];
        let mut sets: Vec<Vec<usize>> = vec![Vec::new(); nf];
        let mut queue = VecDeque::from([self.unbounded]);
        seen[self.unbounded] = true;
        while let Some(f) = queue.pop_front() {
            for h in self.face_half_edges(f) {
                let g = self.face_of[h ^ 1];
                if seen[g] {
                    continue;
                }
                seen[g] = true;
                sets[g] = sym_diff(&sets[f], &self.edge_owners[h / 2]);
                queue.push_back(g);
            }
        }
        for (f, s) in sets.into_iter().enumerate() {
            self.faces[f].containing = s;
        }
    }

    pub fn tail(&self, h: usize) -> usize {
        if h.is_multiple_of(2) {
            self.edge_ends[h / 2].0
        } else {
            self.edge_ends[h / 2].1
        }
    }

    pub fn head(&self, h: usize) -> usize {
        self.tail(h ^ 1)
    }

    pub fn n_half_edges(&self) -> usize {
        self.next.len()
    }

    pub fn cycle(&self, h0: usize) -> Vec<usize> {
        let mut out = vec![h0];
        let mut h = self.next[h0];
        while h != h0 {
            out.push(h);
            h = self.next[h];
        }
        out
    }

    /// Half-edges of all boundary cycles of face `f` (outer first).
    pub fn face_half_edges(&self, f: usize) -> Vec<usize> {
        let face = &self.faces[f];
        let mut out = Vec::new();
        for &h in face.outer.iter().chain(&face.holes) {
            out.extend(self.cycle(h));
        }
        out
    }

    pub fn cycle_ring(&self, h0: usize) -> Vec<Point> {
        self.cycle(h0).into_iter().map(|h| self.vertices[self.tail(h)].clone()).collect()
    }

    /// Maximum size of a containing set over all faces.
    pub fn max_ply(&self) -> usize {
        self.faces.iter().map(|f| f.containing.len()).max().unwrap_or(0)
    }

    /// Objects containing each vertex (closed sense): the union over incident faces.
    pub fn vertex_objects(&self, v: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.outgoing[v].iter().flat_map(|&h| self.faces[self.face_of[h]].containing.iter().copied()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// A point strictly inside face `f` (not for the unbounded face).
    pub fn face_sample(&self, f: usize) -> Option<Point> {
        self.face_samples(f, 1).into_iter().next()
    }

    /// Up to `k` distinct points strictly inside bounded face `f`.
    pub fn face_samples(&self, f: usize, k: usize) -> Vec<Point> {
        let face = &self.faces[f];
        let outer = match face.outer {
            Some(h) => self.cycle_ring(h),
            None => return Vec::new(),
        };
        let holes: Vec<Vec<Point>> = face.holes.iter().map(|&h| self.cycle_ring(h)).collect();
        let mut out = Vec::new();
        let s = crate::geom::polygon::simplify_ring(&outer);
        let three = Coord::from_int(3);
        for (i, j, l) in crate::geom::polygon::triangulate_ring(&outer) {
            let c = Point::new(
                (s[i].x() + s[j].x() + s[l].x()) / &three,
                (s[i].y() + s[j].y() + s[l].y()) / &three,
            );
            if locate_in_ring(&c, &outer) != Location::Inside {
                continue;
            }
            if holes.iter().any(|r| locate_in_ring(&c, r) != Location::Outside) {
                continue;
            }
            out.push(c);
            if out.len() >= k {
                break;
            }
        }
        out
    }

    /// Dual graph of the faces. Parallel dual edges are reduced to the one crossing the
    /// lowest-numbered primal edge. `extra` lists vertices that get their own node,
    /// adjacent to every incident face; node ids are faces then `extra` in order.
    pub fn dual(&self, extra: &[usize]) -> Result<PlaneGraph, PlanarError> {
        let rot = self.dual_rotation(extra);
        let n = rot.len();
        PlaneGraph::new(rot, vec![0; n])
    }

    /// Rotation system of [`Arrangement::dual`].
    pub fn dual_rotation(&self, extra: &[usize]) -> Vec<Vec<usize>> {
        let nf = self.faces.len();
        let mut keep_edge: HashMap<(usize, usize), usize> = HashMap::new();
        for e in 0..self.edge_ends.len() {
            let (f, g) = (self.face_of[2 * e], self.face_of[2 * e + 1]);
            if f != g {
                keep_edge.entry((f.min(g), f.max(g))).or_insert(e);
            }
        }
        let mut extra_node: HashMap<usize, usize> = HashMap::new();
        for (i, &v) in extra.iter().enumerate() {
            extra_node.insert(v, nf + i);
        }
        // For each extra vertex, the corner (outgoing half-edge) chosen per incident face.
        let mut chosen_corner: HashMap<usize, ()> = HashMap::new();
        let mut rot: Vec<Vec<usize>> = vec![Vec::new(); nf + extra.len()];
        for (i, &v) in extra.iter().enumerate() {
            let mut seen_faces: Vec<usize> = Vec::new();
            for &h in &self.outgoing[v] {
                let f = self.face_of[h];
                if !seen_faces.contains(&f) {
                    seen_faces.push(f);
                    chosen_corner.insert(h, ());
                    rot[nf + i].push(f);
                }
            }
        }
        for (f, r) in rot.iter_mut().enumerate().take(nf) {
            for h in self.face_half_edges(f) {
                if let Some(&x) = extra_node.get(&self.tail(h)) {
                    if chosen_corner.contains_key(&h) {
                        r.push(x);
                    }
                }
                let g = self.face_of[h ^ 1];
                if g != f && keep_edge[&(f.min(g), f.max(g))] == h / 2 {
                    r.push(g);
                }
            }
        }
        rot
    }

    /// Boundary cycles (as point rings) separating faces with `inside(face)` from the rest,
    /// oriented with the inside on the left.
    pub fn region_boundary(&self, inside: &dyn Fn(usize) -> bool) -> Vec<Vec<Point>> {
        let nh = self.n_half_edges();
        let on = |h: usize| inside(self.face_of[h]) && !inside(self.face_of[h ^ 1]);
        let mut used = vec![false; nh];
        let mut out = Vec::new();
        for h0 in 0..nh {
            if used[h0] || !on(h0) {
                continue;
            }
            let mut ring = Vec::new();
            let mut h = h0;
            loop {
                used[h] = true;
                ring.push(self.vertices[self.tail(h)].clone());
                // Rotate clockwise around the head until the next boundary half-edge.
                let mut g = self.next[h];
                while !on(g) {
                    g = self.next[g ^ 1];
                }
                h = g;
                if h == h0 {
                    break;
                }
            }
            out.push(ring);
        }
        out
    }
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::disk_polygon;
    use crate::geom::polygon::locate_in_ring;

    fn sq(x: i64, y: i64, s: i64) -> Vec<Point> {
        vec![Point::from_ints(x, y), Point::from_ints(x + s, y), Point::from_ints(x + s, y + s), Point::from_ints(x, y + s)]
    }

    fn bounded(a: &Arrangement) -> usize {
        a.faces.len() - 1
    }

    fn euler_ok(a: &Arrangement) {
        let v = a.vertices.len() as i64;
        let e = a.edge_ends.len() as i64;
        let f = a.faces.len() as i64;
        let mut uf = crate::graph::UnionFind::new(a.vertices.len());
        let mut c = a.vertices.len() as i64;
        for &(x, y) in &a.edge_ends {
            if uf.union(x, y) {
                c -= 1;
            }
        }
        assert_eq!(v - e + f, 1 + c);
    }

    fn containing_is_constant(a: &Arrangement, rings: &[Vec<Point>]) {
        for f in 0..a.faces.len() {
            if f == a.unbounded {
                continue;
            }
            for p in a.face_samples(f, 3) {
                let direct: Vec<usize> = (0..rings.len()).filter(|&i| locate_in_ring(&p, &rings[i]) == Location::Inside).collect();
                assert_eq!(direct, a.faces[f].containing, "face {}", f);
            }
        }
    }

    #[test]
    fn two_overlapping_squares() {
        let rings = vec![sq(0, 0, 2), sq(1, 1, 2)];
        let a = Arrangement::build(&rings).unwrap();
        assert_eq!(bounded(&a), 3);
        euler_ok(&a);
        containing_is_constant(&a, &rings);
        let mut sizes: Vec<usize> = a.faces.iter().map(|f| f.containing.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![0, 1, 1, 2]);
    }

    #[test]
    fn nested_squares() {
        for k in 1..6 {
            let rings: Vec<Vec<Point>> = (0..k).map(|i| sq(i, i, 2 * (k - i) + 1)).collect();
            let a = Arrangement::build(&rings).unwrap();
            assert_eq!(bounded(&a), k as usize);
            let mut sizes: Vec<usize> = a.faces.iter().map(|f| f.containing.len()).collect();
            sizes.sort();
            assert_eq!(sizes, (0..=k as usize).collect::<Vec<_>>());
            containing_is_constant(&a, &rings);
            euler_ok(&a);
            a.dual(&[]).unwrap();
        }
    }

    #[test]
    fn random_disks_euler() {
        let mut r = crate::gen::rng(4);
        use rand::Rng;
        for _ in 0..3 {
            let rings: Vec<Vec<Point>> = (0..10)
                .map(|_| disk_polygon(r.gen_range(0..60), r.gen_range(0..60), r.gen_range(5..25), 64))
                .collect();
            let a = Arrangement::build(&rings).unwrap();
            euler_ok(&a);
            containing_is_constant(&a, &rings);
            a.dual(&[]).unwrap();
        }
    }

    #[test]
    fn shared_edges_and_touching() {
        let rings = vec![sq(0, 0, 1), sq(1, 0, 1), sq(2, 1, 1), sq(0, 0, 1)];
        let a = Arrangement::build(&rings).unwrap();
        euler_ok(&a);
        containing_is_constant(&a, &rings);
        let touch = a.vertices.iter().position(|p| *p == Point::from_ints(2, 1)).unwrap();
        assert_eq!(a.vertex_objects(touch), vec![1, 2]);
        a.dual(&[touch]).unwrap();
    }

    #[test]
    fn union_boundary() {
        let rings = vec![sq(0, 0, 2), sq(1, 1, 2)];
        let a = Arrangement::build(&rings).unwrap();
        let b = a.region_boundary(&|f| !a.faces[f].containing.is_empty());
        assert_eq!(b.len(), 1);
        assert_eq!(crate::geom::polygon::simplify_ring(&b[0]).len(), 8);
        assert_eq!(crate::geom::polygon::signed_area2(&b[0]), Coord::from_int(14));
    }

    #[test]
    fn rejects_degenerate() {
        let flat = vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(2, 0)];
        assert!(Arrangement::build(&[flat]).is_err());
    }
}
