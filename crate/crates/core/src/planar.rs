//! Embedded planar graphs, triangulation and cost-balanced simple-cycle separators.
//!
//! Costs are integer weights; a node's cost is its weight divided by the total,
//! so balance checks (`3 * side <= 2 * total`) stay exact.

use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanarError {
    #[error("inconsistent rotation system: {0}")]
    InconsistentRotation(String),
    #[error("Euler check failed on a component: V={v} E={e} F={f}")]
    Euler { v: usize, e: usize, f: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not triangulated")]
    NotTriangulated,
    #[error("no balanced fundamental cycle found")]
    NoBalancedCycle,
}

/// Graph with a rotation system: `rot[v]` lists the neighbours of `v` in counterclockwise order.
#[derive(Debug, Clone)]
pub struct PlaneGraph {
    rot: Vec<Vec<usize>>,
    weight: Vec<u64>,
    dummy: Vec<bool>,
}

/// Dart bookkeeping derived from a rotation system.
struct Darts {
    offset: Vec<usize>,
    /// `twin_idx[d]` is the index of the reverse dart inside its tail's rotation.
    twin_idx: Vec<usize>,
    head: Vec<usize>,
    tail: Vec<usize>,
}

impl Darts {
    fn build(rot: &[Vec<usize>]) -> Result<Darts, PlanarError> {
        let n = rot.len();
        let mut offset = Vec::with_capacity(n + 1);
        let mut total = 0;
        for r in rot {
            offset.push(total);
            total += r.len();
        }
        offset.push(total);
        let mut sorted: Vec<Vec<(usize, usize)>> = rot
            .iter()
            .map(|r| {
                let mut s: Vec<(usize, usize)> = r.iter().enumerate().map(|(i, &w)| (w, i)).collect();
                s.sort_unstable();
                s
            })
            .collect();
        for (v, s) in sorted.iter_mut().enumerate() {
            for w in s.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(PlanarError::InconsistentRotation(format!("multi-edge {}-{}", v, w[0].0)));
                }
            }
            if s.iter().any(|&(w, _)| w == v) {
                return Err(PlanarError::InconsistentRotation(format!("self-loop at {}", v)));
            }
        }
        let mut twin_idx = vec![0; total];
        let mut head = vec![0; total];
        let mut tail = vec![0; total];
        for u in 0..n {
            for (i, &v) in rot[u].iter().enumerate() {
                if v >= n {
                    return Err(PlanarError::InconsistentRotation(format!("unknown node {}", v)));
                }
                let d = offset[u] + i;
                head[d] = v;
                tail[d] = u;
                match sorted[v].binary_search_by(|&(w, _)| w.cmp(&u)) {
                    Ok(k) => twin_idx[d] = sorted[v][k].1,
                    Err(_) => {
                        return Err(PlanarError::InconsistentRotation(format!("edge {}-{} not symmetric", u, v)))
                    }
                }
            }
        }
        Ok(Darts { offset, twin_idx, head, tail })
    }

    fn twin(&self, d: usize) -> usize {
        self.offset[self.head[d]] + self.twin_idx[d]
    }

    /// Next dart along the face to the left of `d`.
    fn next(&self, d: usize, rot: &[Vec<usize>]) -> usize {
        let v = self.head[d];
        let deg = rot[v].len();
        let i = self.twin_idx[d];
        self.offset[v] + (i + deg - 1) % deg
    }
}

/// Faces as dart cycles plus the face id of every dart.
pub struct Faces {
    pub cycles: Vec<Vec<usize>>,
    pub face_of: Vec<usize>,
}

impl PlaneGraph {
    /// Validates symmetry, simplicity and Euler's formula per component.
    pub fn new(rot: Vec<Vec<usize>>, weight: Vec<u64>) -> Result<Self, PlanarError> {
        let n = rot.len();
        assert_eq!(weight.len(), n);
        let g = PlaneGraph { rot, weight, dummy: vec![false; n] };
        g.check_euler()?;
        Ok(g)
    }

    pub fn with_dummies(mut self, dummy: Vec<bool>) -> Self {
        assert_eq!(dummy.len(), self.n());
        self.dummy = dummy;
        self
    }

    pub fn n(&self) -> usize {
        self.rot.len()
    }

    pub fn m(&self) -> usize {
        self.rot.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weight[v]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weight
    }

    pub fn is_dummy(&self, v: usize) -> bool {
        self.dummy[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rot[u].contains(&v)
    }

    pub fn faces(&self) -> Result<Faces, PlanarError> {
        let darts = Darts::build(&self.rot)?;
        Ok(trace_faces(&self.rot, &darts))
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &self.rot[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        q.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    fn check_euler(&self) -> Result<(), PlanarError> {
        let darts = Darts::build(&self.rot)?;
        let faces = trace_faces(&self.rot, &darts);
        let comps = self.components();
        let mut comp_of = vec![0; self.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut fcount = vec![0usize; comps.len()];
        for cyc in &faces.cycles {
            fcount[comp_of[darts.tail[cyc[0]]]] += 1;
        }
        for (i, c) in comps.iter().enumerate() {
            let v = c.len();
            let e: usize = c.iter().map(|&u| self.rot[u].len()).sum::<usize>() / 2;
            let f = if e == 0 { 1 } else { fcount[i] };
            if v + f != e + 2 {
                return Err(PlanarError::Euler { v, e, f });
            }
        }
        Ok(())
    }

    pub fn is_triangulated(&self) -> Result<bool, PlanarError> {
        Ok(self.faces()?.cycles.iter().all(|c| c.len() == 3))
    }
}

fn trace_faces(rot: &[Vec<usize>], darts: &Darts) -> Faces {
    let total = darts.head.len();
    let mut face_of = vec![usize::MAX; total];
    let mut cycles = Vec::new();
    for start in 0..total {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut d = start;
        loop {
            face_of[d] = id;
            cyc.push(d);
            d = darts.next(d, rot);
            if d == start {
                break;
            }
        }
        cycles.push(cyc);
    }
    Faces { cycles, face_of }
}

/// Adds zero-weight dummy nodes until every face is a triangle.
///
/// Faces whose boundary walk visits distinct nodes get one star node; faces whose
/// walk repeats a node get a ring of dummies inside the walk plus a centre node,
/// which keeps the result simple.
pub fn triangulate(g: &PlaneGraph) -> Result<PlaneGraph, PlanarError> {
    if g.components().len() > 1 {
        return Err(PlanarError::NotConnected);
    }
    let darts = Darts::build(&g.rot)?;
    let faces = trace_faces(&g.rot, &darts);
    let mut rot = g.rot.clone();
    let mut weight = g.weight.clone();
    let mut dummy = g.dummy.clone();
    let mut new_node = |rot: &mut Vec<Vec<usize>>| {
        rot.push(Vec::new());
        weight.push(0);
        dummy.push(true);
        rot.len() - 1
    };
    for cyc in &faces.cycles {
        let k = cyc.len();
        if k <= 3 {
            continue;
        }
        let walk: Vec<usize> = cyc.iter().map(|&d| darts.tail[d]).collect();
        let mut seen = walk.clone();
        seen.sort_unstable();
        seen.dedup();
        // Corner at walk[i]: insert right after walk[i + 1] in rot[walk[i]].
        if seen.len() == k {
            let d = new_node(&mut rot);
            rot[d] = walk.clone();
            for i in 0..k {
                let w = walk[i];
                let after = walk[(i + 1) % k];
                let p = rot[w].iter().position(|&x| x == after).unwrap();
                rot[w].insert(p + 1, d);
            }
        } else {
            let ring: Vec<usize> = (0..k).map(|_| new_node(&mut rot)).collect();
            let c = new_node(&mut rot);
            rot[c] = ring.clone();
            for i in 0..k {
                let r = ring[i];
                rot[r] = vec![walk[(i + 1) % k], ring[(i + 1) % k], c, ring[(i + k - 1) % k], walk[i]];
            }
            for i in 0..k {
                let w = walk[i];
                let after = walk[(i + 1) % k];
                let p = rot[w].iter().position(|&x| x == after).unwrap();
                rot[w].insert(p + 1, ring[i]);
                rot[w].insert(p + 2, ring[(i + k - 1) % k]);
            }
        }
    }
    let n = rot.len();
    let out = PlaneGraph { rot, weight, dummy };
    debug_assert_eq!(out.n(), n);
    out.check_euler()?;
    Ok(out)
}

/// `S` is a simple cycle (in order) when it has three or more nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSeparator {
    pub s: Vec<usize>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Default constant in the `|S| <= c * sqrt(V)` audit.
pub const SEPARATOR_CONSTANT: f64 = 4.0;

struct Candidate {
    len: usize,
    imbalance: u64,
    cycle: Vec<usize>,
    inside: Vec<bool>,
}

/// Balanced simple-cycle separator of a triangulated plane graph.
///
/// Tries several BFS roots; for each spanning tree every fundamental cycle is
/// scored through the dual co-tree, and the shortest balanced cycle wins.
pub fn cycle_separator(g: &PlaneGraph) -> Result<CycleSeparator, PlanarError> {
    let n = g.n();
    if n <= 4 {
        return Ok(CycleSeparator { s: (0..n).collect(), a: Vec::new(), b: Vec::new() });
    }
    if g.components().len() > 1 {
        return Err(PlanarError::NotConnected);
    }
    let darts = Darts::build(&g.rot)?;
    let faces = trace_faces(&g.rot, &darts);
    if faces.cycles.iter().any(|c| c.len() != 3) {
        return Err(PlanarError::NotTriangulated);
    }
    let mut weight: Vec<u64> = g.weight.clone();
    if weight.iter().all(|&w| w == 0) {
        weight = g.dummy.iter().map(|&d| if d { 0 } else { 1 }).collect();
        if weight.iter().all(|&w| w == 0) {
            weight = vec![1; n];
        }
    }
    let total: u64 = weight.iter().sum();

    let mut best: Option<Candidate> = None;
    for root in candidate_roots(g, &weight) {
        if let Some(c) = best_cycle_for_root(g, &darts, &faces, &weight, total, root) {
            let better = match &best {
                None => true,
                Some(b) => (c.len, c.imbalance) < (b.len, b.imbalance),
            };
            if better {
                best = Some(c);
            }
        }
    }
    let c = best.ok_or(PlanarError::NoBalancedCycle)?;
    let mut on_cycle = vec![false; n];
    for &v in &c.cycle {
        on_cycle[v] = true;
    }
    let a = (0..n).filter(|&v| !on_cycle[v] && c.inside[v]).collect();
    let b = (0..n).filter(|&v| !on_cycle[v] && !c.inside[v]).collect();
    Ok(CycleSeparator { s: c.cycle, a, b })
}

fn bfs(g: &PlaneGraph, root: usize) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    parent[root] = root;
    let mut q = VecDeque::from([root]);
    while let Some(u) = q.pop_front() {
        for &w in &g.rot[u] {
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                parent[w] = u;
                q.push_back(w);
            }
        }
    }
    (parent, depth)
}

fn candidate_roots(g: &PlaneGraph, weight: &[u64]) -> Vec<usize> {
    let n = g.n();
    let mut roots = Vec::new();
    let heavy = (0..n).max_by_key(|&v| (weight[v], std::cmp::Reverse(v))).unwrap();
    roots.push(heavy);
    // Double sweep towards a low-eccentricity node.
    let (_, d0) = bfs(g, 0);
    let far = (0..n).max_by_key(|&v| (d0[v], std::cmp::Reverse(v))).unwrap();
    let (p1, d1) = bfs(g, far);
    let far2 = (0..n).max_by_key(|&v| (d1[v], std::cmp::Reverse(v))).unwrap();
    let mut mid = far2;
    for _ in 0..d1[far2] / 2 {
        mid = p1[mid];
    }
    roots.push(mid);
    let (_, dm) = bfs(g, mid);
    let ecc = *dm.iter().max().unwrap();
    // Nodes near the centre give other trees of similar radius.
    let mut near: Vec<usize> = (0..n).filter(|&v| dm[v] <= 1 && !g.dummy[v]).collect();
    near.sort_unstable();
    for v in near.into_iter().take(3) {
        roots.push(v);
    }
    let _ = ecc;
    roots.push(0);
    roots.push(n / 2);
    roots.sort_unstable();
    roots.dedup();
    roots
}

fn best_cycle_for_root(
    g: &PlaneGraph,
    darts: &Darts,
    faces: &Faces,
    weight: &[u64],
    total: u64,
    root: usize,
) -> Option<Candidate> {
    let n = g.n();
    let (parent, depth) = bfs(g, root);
    let nf = faces.cycles.len();
    let is_tree_dart = |d: usize| {
        let (u, v) = (darts.tail[d], darts.head[d]);
        (parent[v] == u && v != root) || (parent[u] == v && u != root)
    };
    // Dual co-tree rooted at face 0.
    let mut dual_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
    for d in 0..darts.head.len() {
        if is_tree_dart(d) {
            continue;
        }
        let t = darts.twin(d);
        if d < t {
            let (f1, f2) = (faces.face_of[d], faces.face_of[t]);
            dual_adj[f1].push((f2, d));
            dual_adj[f2].push((f1, d));
        }
    }
    let mut tin = vec![0usize; nf];
    let mut tout = vec![0usize; nf];
    let mut fparent_dart = vec![usize::MAX; nf];
    let mut visited = vec![false; nf];
    let mut order = Vec::with_capacity(nf);
    let mut stack = vec![(0usize, 0usize)];
    visited[0] = true;
    let mut clock = 0;
    tin[0] = 0;
    order.push(0);
    while let Some(&mut (f, ref mut i)) = stack.last_mut() {
        if *i < dual_adj[f].len() {
            let (h, d) = dual_adj[f][*i];
            *i += 1;
            if !visited[h] {
                visited[h] = true;
                clock += 1;
                tin[h] = clock;
                fparent_dart[h] = d;
                order.push(h);
                stack.push((h, 0));
            }
        } else {
            tout[f] = clock;
            stack.pop();
        }
    }
    if order.len() != nf {
        return None;
    }
    // Each node is charged to one incident face.
    let mut phi = vec![0usize; n];
    for v in 0..n {
        phi[v] = faces.face_of[darts.offset[v]];
    }
    let mut sub = vec![0u64; nf];
    for v in 0..n {
        sub[phi[v]] += weight[v];
    }
    for &f in order.iter().rev() {
        let d = fparent_dart[f];
        if d != usize::MAX {
            let (a, b) = (faces.face_of[d], faces.face_of[darts.twin(d)]);
            let p = if a == f { b } else { a };
            sub[p] += sub[f];
        }
    }
    let in_subtree = |f: usize, c: usize| tin[c] <= tin[f] && tin[f] <= tout[c];

    let mut best: Option<(usize, u64, usize, usize)> = None;
    let mut path_u = Vec::new();
    let mut path_v = Vec::new();
    for f in 1..nf {
        let d = fparent_dart[f];
        let (u, v) = (darts.tail[d], darts.head[d]);
        path_u.clear();
        path_v.clear();
        let (mut x, mut y) = (u, v);
        while depth[x] > depth[y] {
            path_u.push(x);
            x = parent[x];
        }
        while depth[y] > depth[x] {
            path_v.push(y);
            y = parent[y];
        }
        while x != y {
            path_u.push(x);
            path_v.push(y);
            x = parent[x];
            y = parent[y];
        }
        let len = path_u.len() + path_v.len() + 1;
        if let Some((bl, _, _, _)) = best {
            if len > bl {
                continue;
            }
        }
        let mut inside = sub[f];
        let mut on = weight[x];
        if in_subtree(phi[x], f) {
            inside -= weight[x];
        }
        for &w in path_u.iter().chain(path_v.iter()) {
            on += weight[w];
            if in_subtree(phi[w], f) {
                inside -= weight[w];
            }
        }
        let outside = total - inside - on;
        if 3 * inside <= 2 * total && 3 * outside <= 2 * total {
            let imb = inside.abs_diff(outside);
            let better = match best {
                None => true,
                Some((bl, bi, _, _)) => (len, imb) < (bl, bi),
            };
            if better {
                best = Some((len, imb, f, x));
            }
        }
    }
    let (len, imbalance, f, _) = best?;
    let d = fparent_dart[f];
    let (u, v) = (darts.tail[d], darts.head[d]);
    let (mut x, mut y) = (u, v);
    let mut left = Vec::new();
    let mut right = Vec::new();
    while depth[x] > depth[y] {
        left.push(x);
        x = parent[x];
    }
    while depth[y] > depth[x] {
        right.push(y);
        y = parent[y];
    }
    while x != y {
        left.push(x);
        right.push(y);
        x = parent[x];
        y = parent[y];
    }
    let mut cycle = left;
    cycle.push(x);
    cycle.extend(right.into_iter().rev());
    let mut on_cycle = vec![false; n];
    for &w in &cycle {
        on_cycle[w] = true;
    }
    let inside = (0..n).map(|w| !on_cycle[w] && in_subtree(phi[w], f)).collect();
    Some(Candidate { len, imbalance, cycle, inside })
}

/// Checks the separator contract; returns a description of the first violation.
pub fn audit_separator(g: &PlaneGraph, sep: &CycleSeparator) -> Result<(), String> {
    let n = g.n();
    let mut side = vec![0u8; n];
    for &v in &sep.s {
        if side[v] != 0 {
            return Err(format!("node {} repeated", v));
        }
        side[v] = 1;
    }
    for &v in &sep.a {
        if side[v] != 0 {
            return Err(format!("node {} in two parts", v));
        }
        side[v] = 2;
    }
    for &v in &sep.b {
        if side[v] != 0 {
            return Err(format!("node {} in two parts", v));
        }
        side[v] = 3;
    }
    if side.contains(&0) {
        return Err("parts do not cover all nodes".into());
    }
    for u in 0..n {
        for &w in g.rotation(u) {
            if side[u] == 2 && side[w] == 3 {
                return Err(format!("edge {}-{} joins A and B", u, w));
            }
        }
    }
    let total: u64 = g.weights().iter().sum();
    let wa: u64 = sep.a.iter().map(|&v| g.weight(v)).sum();
    let wb: u64 = sep.b.iter().map(|&v| g.weight(v)).sum();
    if 3 * wa > 2 * total || 3 * wb > 2 * total {
        return Err(format!("unbalanced: A={} B={} total={}", wa, wb, total));
    }
    if sep.s.len() >= 3 {
        let k = sep.s.len();
        for i in 0..k {
            if !g.has_edge(sep.s[i], sep.s[(i + 1) % k]) {
                return Err(format!("cycle broken between {} and {}", sep.s[i], sep.s[(i + 1) % k]));
            }
        }
    }
    Ok(())
}

/// Rotation system of a straight-line drawing (neighbours sorted by angle).
pub fn rotation_from_coords(points: &[(i64, i64)], edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut rot = vec![Vec::new(); n];
    for &(u, v) in edges {
        rot[u].push(v);
        rot[v].push(u);
    }
    for (u, r) in rot.iter_mut().enumerate() {
        let (ux, uy) = points[u];
        r.sort_by(|&a, &b| {
            let da = crate::geom::Point::from_ints(points[a].0 - ux, points[a].1 - uy);
            let db = crate::geom::Point::from_ints(points[b].0 - ux, points[b].1 - uy);
            crate::geom::angle_cmp(&da, &db)
        });
        r.dedup();
    }
    rot
}
