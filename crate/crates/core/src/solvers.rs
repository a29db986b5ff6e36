//! Exact solvers by divide and conquer over clique-based separators, and exhaustive
//! reference solvers for small graphs.
//!
//! A solution meets every separator clique in a bounded number of nodes (one for independent
//! sets, two for induced forests), so the separator part can be enumerated and the two sides
//! solved recursively.

use std::collections::{BTreeMap, HashMap};

use crate::graph::{Graph, UnionFind};
use crate::oracle::SeparatorOracle;
use crate::separator::CliqueSeparator;

pub const MIS_BASE_N: usize = 20;
pub const MIF_BASE_N: usize = 14;
pub const COLORING_BASE_N: usize = 18;

pub const BRUTE_MIS_MAX: usize = 25;
pub const BRUTE_MIF_MAX: usize = 16;
pub const BRUTE_COLORING_MAX: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("separator oracle failed: {0}")]
    Oracle(String),
    #[error("graph has {n} nodes, exhaustive search is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("q must be at least 1")]
    BadQ,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Separator assignments whose sides were solved.
    pub nodes_expanded: u64,
    pub oracle_calls: u64,
    /// Subproblems solved directly because the separator made no progress or the depth cap hit.
    pub fallbacks: u64,
    pub memo_hits: u64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub nodes: Vec<usize>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone)]
pub struct ColoringOutcome {
    /// Colour per node, or `None` when the graph is not `q`-colourable.
    pub coloring: Option<Vec<u8>>,
    pub stats: SolveStats,
}

fn depth_cap(n: usize) -> usize {
    2 * (usize::BITS - n.leading_zeros()) as usize + 4
}

/// Separator of `nodes` that strictly shrinks both sides, or `None`.
fn useful_separator(
    oracle: &dyn SeparatorOracle,
    nodes: &[usize],
    weight: &dyn Fn(usize) -> u64,
    stats: &mut SolveStats,
) -> Result<Option<CliqueSeparator>, SolverError> {
    stats.oracle_calls += 1;
    let s = oracle.separate(nodes, weight).map_err(SolverError::Oracle)?;
    let k = s.size();
    if k == 0 || s.a.len().max(s.b.len()) + k >= nodes.len() {
        stats.fallbacks += 1;
        return Ok(None);
    }
    Ok(Some(s))
}

fn better(a: &[usize], b: &[usize]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

fn union_sorted(parts: &[&[usize]]) -> Vec<usize> {
    let mut v: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    v.sort_unstable();
    v
}

/// Connected components of `g[nodes]`, each sorted.
fn components_of(g: &Graph, nodes: &[usize], mark: &mut [bool]) -> Vec<Vec<usize>> {
    nodes.iter().for_each(|&v| mark[v] = true);
    let mut out = Vec::new();
    for &s in nodes {
        if !mark[s] {
            continue;
        }
        mark[s] = false;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            for &w in g.neighbors(comp[k]) {
                if mark[w] {
                    mark[w] = false;
                    comp.push(w);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Maximum independent set of `g[nodes]` by branch and bound.
fn mis_branch_and_bound(g: &Graph, nodes: &[usize]) -> Vec<usize> {
    let k = nodes.len();
    let pos: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = nodes.iter().map(|&v| g.neighbors(v).iter().filter_map(|w| pos.get(w).copied()).collect()).collect();
    let mut best = Vec::new();
    let mut cur = Vec::new();
    let mut alive = vec![true; k];
    fn go(adj: &[Vec<usize>], alive: &mut Vec<bool>, left: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        if cur.len() + left <= best.len() {
            return;
        }
        // Lowest-degree alive vertex; degree at most 1 is always safe to take.
        let mut pick = None;
        let mut pick_deg = usize::MAX;
        let mut branch = None;
        let mut branch_deg = 0;
        for v in 0..alive.len() {
            if !alive[v] {
                continue;
            }
            let d = adj[v].iter().filter(|&&w| alive[w]).count();
            if d < pick_deg {
                pick_deg = d;
                pick = Some(v);
            }
            if d > branch_deg || branch.is_none() {
                branch_deg = d;
                branch = Some(v);
            }
        }
        let Some(v) = pick else {
            if better_local(cur, best) {
                *best = cur.clone();
            }
            return;
        };
        let take = |v: usize, alive: &mut Vec<bool>| {
            let mut removed = vec![v];
            alive[v] = false;
            for &w in &adj[v] {
                if alive[w] {
                    alive[w] = false;
                    removed.push(w);
                }
            }
            removed
        };
        if pick_deg <= 1 {
            let removed = take(v, alive);
            cur.push(v);
            go(adj, alive, left - removed.len(), cur, best);
            cur.pop();
            removed.iter().for_each(|&w| alive[w] = true);
            return;
        }
        let v = branch.expect("alive vertex");
        let removed = take(v, alive);
        cur.push(v);
        go(adj, alive, left - removed.len(), cur, best);
        cur.pop();
        removed.iter().for_each(|&w| alive[w] = true);
        alive[v] = false;
        go(adj, alive, left - 1, cur, best);
        alive[v] = true;
    }
    fn better_local(a: &[usize], b: &[usize]) -> bool {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        x.sort_unstable();
        y.sort_unstable();
        better(&x, &y)
    }
    go(&adj, &mut alive, k, &mut cur, &mut best);
    let mut out: Vec<usize> = best.iter().map(|&i| nodes[i]).collect();
    out.sort_unstable();
    out
}

struct Mis<'a> {
    g: &'a Graph,
    oracle: &'a dyn SeparatorOracle,
    base_n: usize,
    cap: usize,
    memo: HashMap<Vec<usize>, Vec<usize>>,
    mark: Vec<bool>,
    stats: SolveStats,
}

impl Mis<'_> {
    fn solve(&mut self, nodes: Vec<usize>, depth: usize) -> Result<Vec<usize>, SolverError> {
        if nodes.is_empty() {
            return Ok(Vec::new());
        }
        if let Some(r) = self.memo.get(&nodes) {
            self.stats.memo_hits += 1;
            return Ok(r.clone());
        }
        let comps = components_of(self.g, &nodes, &mut self.mark);
        let res = if comps.len() > 1 {
            let mut parts = Vec::new();
            for c in comps {
                parts.push(self.solve(c, depth)?);
            }
            union_sorted(&parts.iter().map(|p| p.as_slice()).collect::<Vec<_>>())
        } else {
            self.solve_connected(&nodes, depth)?
        };
        self.memo.insert(nodes, res.clone());
        Ok(res)
    }

    fn solve_connected(&mut self, nodes: &[usize], depth: usize) -> Result<Vec<usize>, SolverError> {
        if nodes.len() <= self.base_n || depth >= self.cap {
            if nodes.len() > self.base_n {
                self.stats.fallbacks += 1;
            }
            return Ok(mis_branch_and_bound(self.g, nodes));
        }
        let Some(sep) = useful_separator(self.oracle, nodes, &|_| 1, &mut self.stats)? else {
            return Ok(mis_branch_and_bound(self.g, nodes));
        };
        // Removing nodes never enlarges an independent set, so the full sides bound every leaf.
        let caps = (self.solve(sep.a.clone(), depth + 1)?.len(), self.solve(sep.b.clone(), depth + 1)?.len());
        let mut blocked = vec![0u32; self.g.n()];
        let mut best: Option<Vec<usize>> = None;
        let mut chosen = Vec::new();
        self.enumerate(&sep, caps, 0, &mut chosen, &mut blocked, &mut best, depth)?;
        Ok(best.expect("the empty choice is always feasible"))
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        sep: &CliqueSeparator,
        caps: (usize, usize),
        k: usize,
        chosen: &mut Vec<usize>,
        blocked: &mut Vec<u32>,
        best: &mut Option<Vec<usize>>,
        depth: usize,
    ) -> Result<(), SolverError> {
        let free = |set: &[usize], blocked: &[u32]| set.iter().filter(|&&v| blocked[v] == 0).copied().collect::<Vec<_>>();
        let a = free(&sep.a, blocked);
        let b = free(&sep.b, blocked);
        let open = sep.cliques[k..].iter().filter(|c| c.iter().any(|&v| blocked[v] == 0)).count();
        let bound = chosen.len() + open + a.len().min(caps.0) + b.len().min(caps.1);
        if best.as_ref().is_some_and(|x| bound < x.len()) {
            return Ok(());
        }
        if k == sep.cliques.len() {
            self.stats.nodes_expanded += 1;
            let ra = self.solve(a, depth + 1)?;
            if best.as_ref().is_some_and(|x| chosen.len() + ra.len() + b.len().min(caps.1) < x.len()) {
                return Ok(());
            }
            let rb = self.solve(b, depth + 1)?;
            let cand = union_sorted(&[chosen, &ra, &rb]);
            if best.as_ref().is_none_or(|x| better(&cand, x)) {
                *best = Some(cand);
            }
            return Ok(());
        }
        for i in 0..=sep.cliques[k].len() {
            if i == sep.cliques[k].len() {
                self.enumerate(sep, caps, k + 1, chosen, blocked, best, depth)?;
                break;
            }
            let v = sep.cliques[k][i];
            if blocked[v] > 0 {
                continue;
            }
            blocked[v] += 1;
            self.g.neighbors(v).iter().for_each(|&w| blocked[w] += 1);
            chosen.push(v);
            self.enumerate(sep, caps, k + 1, chosen, blocked, best, depth)?;
            chosen.pop();
            blocked[v] -= 1;
            self.g.neighbors(v).iter().for_each(|&w| blocked[w] -= 1);
        }
        Ok(())
    }
}

/// Maximum independent set. For every choice of at most one node per separator clique,
/// the sides are solved on the nodes not dominated by the choice.
pub fn solve_mis(g: &Graph, oracle: &dyn SeparatorOracle, base_n: usize) -> Result<Solution, SolverError> {
    let mut s = Mis { g, oracle, base_n, cap: depth_cap(g.n()), memo: HashMap::new(), mark: vec![false; g.n()], stats: SolveStats::default() };
    let nodes = s.solve((0..g.n()).collect(), 0)?;
    Ok(Solution { nodes, stats: s.stats })
}

/// Canonical class labels: classes numbered by first occurrence.
fn canonical(labels: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut map: HashMap<usize, usize> = HashMap::new();
    labels
        .into_iter()
        .map(|l| {
            let k = map.len();
            *map.entry(l).or_insert(k)
        })
        .collect()
}

/// Best forest per boundary partition.
type Table = BTreeMap<Vec<usize>, Vec<usize>>;

fn offer(t: &mut Table, rho: Vec<usize>, x: Vec<usize>) {
    match t.get(&rho) {
        Some(old) if !better(&x, old) => {}
        _ => {
            t.insert(rho, x);
        }
    }
}

/// Union-find over a set of decided forest nodes.
#[derive(Clone)]
struct Decided {
    ids: Vec<usize>,
    uf: UnionFind,
}

impl Decided {
    fn index(&self, v: usize) -> usize {
        self.ids.binary_search(&v).expect("decided node")
    }

    /// Joins the members of each class of `rho` over `boundary`.
    fn merge(&mut self, boundary: &[usize], rho: &[usize]) {
        let mut first: HashMap<usize, usize> = HashMap::new();
        for (&v, &l) in boundary.iter().zip(rho) {
            let i = self.index(v);
            match first.get(&l) {
                Some(&j) => {
                    self.uf.union(i, j);
                }
                None => {
                    first.insert(l, i);
                }
            }
        }
    }

    fn partition(&mut self, boundary: &[usize]) -> Vec<usize> {
        let idx: Vec<usize> = boundary.iter().map(|&v| self.index(v)).collect();
        let roots: Vec<usize> = idx.into_iter().map(|i| self.uf.find(i)).collect();
        canonical(roots)
    }
}

struct Mif<'a> {
    g: &'a Graph,
    oracle: &'a dyn SeparatorOracle,
    base_n: usize,
    cap: usize,
    memo: HashMap<(Vec<usize>, Vec<usize>, Vec<usize>), Table>,
    in_u: Vec<bool>,
    stats: SolveStats,
}

impl Mif<'_> {
    /// Forests `X` in `g[u]` such that `X` plus the boundary `b`, whose nodes are already
    /// connected according to `pi`, stays acyclic; best `X` per resulting partition of `b`.
    fn solve(&mut self, u: Vec<usize>, b: Vec<usize>, pi: Vec<usize>, depth: usize) -> Result<Table, SolverError> {
        let key = (u, b, pi);
        if let Some(t) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(t.clone());
        }
        let (u, b, pi) = &key;
        let t = if u.is_empty() {
            Table::from([(pi.clone(), Vec::new())])
        } else if u.len() <= self.base_n || depth >= self.cap {
            if u.len() > self.base_n {
                self.stats.fallbacks += 1;
            }
            self.exhaustive(u, b, pi)
        } else {
            self.divide(u, b, pi, depth)?
        };
        self.memo.insert(key, t.clone());
        Ok(t)
    }

    fn start(&self, b: &[usize], pi: &[usize], extra: &[usize]) -> Decided {
        let ids = union_sorted(&[b, extra]);
        let mut d = Decided { uf: UnionFind::new(ids.len()), ids };
        d.merge(b, pi);
        d
    }

    /// Adds the edges from `x` to decided nodes; false on a cycle.
    fn add_edges(&self, d: &mut Decided, x: &[usize]) -> bool {
        for &v in x {
            let i = d.index(v);
            for &w in self.g.neighbors(v) {
                let Ok(j) = d.ids.binary_search(&w) else { continue };
                if x.binary_search(&w).is_ok() && w < v {
                    continue;
                }
                if !d.uf.union(i, j) {
                    return false;
                }
            }
        }
        true
    }

    fn exhaustive(&self, u: &[usize], b: &[usize], pi: &[usize]) -> Table {
        let mut t = Table::new();
        for mask in 0u64..(1u64 << u.len()) {
            let x: Vec<usize> = (0..u.len()).filter(|&i| mask >> i & 1 == 1).map(|i| u[i]).collect();
            let mut d = self.start(b, pi, &x);
            if self.add_edges(&mut d, &x) {
                let rho = d.partition(b);
                offer(&mut t, rho, x);
            }
        }
        t
    }

    fn divide(&mut self, u: &[usize], b: &[usize], pi: &[usize], depth: usize) -> Result<Table, SolverError> {
        u.iter().for_each(|&v| self.in_u[v] = true);
        let mut near = vec![false; self.g.n()];
        for &v in b {
            self.g.neighbors(v).iter().filter(|&&w| self.in_u[w]).for_each(|&w| near[w] = true);
        }
        u.iter().for_each(|&v| self.in_u[v] = false);
        let boundary_cost = depth % 2 == 1 && u.iter().any(|&v| near[v]);
        let weight = |v: usize| if !boundary_cost || near[v] { 1 } else { 0 };
        let Some(sep) = useful_separator(self.oracle, u, &weight, &mut self.stats)? else {
            self.stats.fallbacks += 1;
            return Ok(self.exhaustive(u, b, pi));
        };
        let mut t = Table::new();
        let mut chosen = Vec::new();
        self.enumerate(&sep, 0, &mut chosen, b, pi, &mut t, depth)?;
        Ok(t)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        sep: &CliqueSeparator,
        k: usize,
        chosen: &mut Vec<usize>,
        b: &[usize],
        pi: &[usize],
        t: &mut Table,
        depth: usize,
    ) -> Result<(), SolverError> {
        let mut f = chosen.clone();
        f.sort_unstable();
        let mut d = self.start(b, pi, &f);
        if !self.add_edges(&mut d, &f) {
            return Ok(());
        }
        if k == sep.cliques.len() {
            self.stats.nodes_expanded += 1;
            return self.combine(sep, &f, d, b, t, depth);
        }
        let c = &sep.cliques[k];
        self.enumerate(sep, k + 1, chosen, b, pi, t, depth)?;
        for i in 0..c.len() {
            chosen.push(c[i]);
            self.enumerate(sep, k + 1, chosen, b, pi, t, depth)?;
            for j in i + 1..c.len() {
                chosen.push(c[j]);
                self.enumerate(sep, k + 1, chosen, b, pi, t, depth)?;
                chosen.pop();
            }
            chosen.pop();
        }
        Ok(())
    }

    /// Solves side A, then side B under each connectivity side A can produce.
    fn combine(&mut self, sep: &CliqueSeparator, f: &[usize], d: Decided, b: &[usize], t: &mut Table, depth: usize) -> Result<(), SolverError> {
        let touching = |g: &Graph, side: &[usize], ids: &[usize]| -> Vec<usize> {
            let mut on = vec![false; g.n()];
            side.iter().for_each(|&v| on[v] = true);
            ids.iter().filter(|&&v| g.neighbors(v).iter().any(|&w| on[w])).copied().collect()
        };
        let ba = touching(self.g, &sep.a, &d.ids);
        let mut da = d.clone();
        let pa = da.partition(&ba);
        let ta = self.solve(sep.a.clone(), ba.clone(), pa, depth + 1)?;
        let bb = touching(self.g, &sep.b, &d.ids);
        for (rho_a, xa) in ta {
            let mut d2 = d.clone();
            d2.merge(&ba, &rho_a);
            let pb = d2.partition(&bb);
            let tb = self.solve(sep.b.clone(), bb.clone(), pb, depth + 1)?;
            for (rho_b, xb) in tb {
                let mut d3 = d2.clone();
                d3.merge(&bb, &rho_b);
                offer(t, d3.partition(b), union_sorted(&[f, &xa, &xb]));
            }
        }
        Ok(())
    }
}

/// Maximum induced forest; its complement is a minimum feedback vertex set. At most two
/// nodes per separator clique are chosen, and the sides are combined through the
/// partitions they induce on the chosen boundary nodes. Separators alternately balance
/// all nodes and the nodes next to the boundary.
pub fn solve_mif(g: &Graph, oracle: &dyn SeparatorOracle, base_n: usize) -> Result<Solution, SolverError> {
    let base_n = base_n.min(60);
    let mut s = Mif { g, oracle, base_n, cap: depth_cap(g.n()), memo: HashMap::new(), in_u: vec![false; g.n()], stats: SolveStats::default() };
    let t = s.solve((0..g.n()).collect(), Vec::new(), Vec::new(), 0)?;
    let nodes = t.into_values().next().expect("the empty forest is always feasible");
    Ok(Solution { nodes, stats: s.stats })
}

/// A clique of `k` nodes, if one exists.
pub fn find_clique(g: &Graph, k: usize) -> Option<Vec<usize>> {
    fn grow(g: &Graph, cur: &mut Vec<usize>, cand: &[usize], k: usize) -> bool {
        if cur.len() == k {
            return true;
        }
        if cur.len() + cand.len() < k {
            return false;
        }
        for (i, &v) in cand.iter().enumerate() {
            let next: Vec<usize> = cand[i + 1..].iter().filter(|&&w| g.has_edge(v, w)).copied().collect();
            cur.push(v);
            if grow(g, cur, &next, k) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if k == 0 {
        return Some(Vec::new());
    }
    for v in 0..g.n() {
        let cand: Vec<usize> = g.neighbors(v).iter().filter(|&&w| w > v).copied().collect();
        let mut cur = vec![v];
        if grow(g, &mut cur, &cand, k) {
            return Some(cur);
        }
    }
    None
}

const UNCOLORED: u8 = u8::MAX;

struct Coloring<'a> {
    g: &'a Graph,
    oracle: &'a dyn SeparatorOracle,
    q: u8,
    base_n: usize,
    cap: usize,
    colors: Vec<u8>,
    failed: std::collections::HashSet<(Vec<usize>, Vec<u32>)>,
    stats: SolveStats,
}

impl Coloring<'_> {
    fn forbidden(&self, v: usize) -> u32 {
        self.g.neighbors(v).iter().filter(|&&w| self.colors[w] != UNCOLORED).fold(0, |m, &w| m | 1 << self.colors[w])
    }

    /// Colours `nodes` consistently with the coloured nodes; on failure leaves them uncoloured.
    fn solve(&mut self, nodes: &[usize], depth: usize) -> Result<bool, SolverError> {
        if nodes.is_empty() {
            return Ok(true);
        }
        let key = (nodes.to_vec(), nodes.iter().map(|&v| self.forbidden(v)).collect::<Vec<_>>());
        if self.failed.contains(&key) {
            self.stats.memo_hits += 1;
            return Ok(false);
        }
        let ok = if nodes.len() <= self.base_n || depth >= self.cap {
            if nodes.len() > self.base_n {
                self.stats.fallbacks += 1;
            }
            self.backtrack(nodes, 0)
        } else {
            match useful_separator(self.oracle, nodes, &|_| 1, &mut self.stats)? {
                None => self.backtrack(nodes, 0),
                Some(sep) => {
                    let s = sep.separator_nodes();
                    self.separator_colorings(&sep, &s, 0, depth)?
                }
            }
        };
        if !ok {
            self.failed.insert(key);
        }
        Ok(ok)
    }

    fn separator_colorings(&mut self, sep: &CliqueSeparator, s: &[usize], i: usize, depth: usize) -> Result<bool, SolverError> {
        if i == s.len() {
            self.stats.nodes_expanded += 1;
            if self.solve(&sep.a, depth + 1)? {
                if self.solve(&sep.b, depth + 1)? {
                    return Ok(true);
                }
                sep.a.iter().for_each(|&v| self.colors[v] = UNCOLORED);
            }
            return Ok(false);
        }
        let v = s[i];
        let forbid = self.forbidden(v);
        for c in 0..self.q {
            if forbid >> c & 1 == 0 {
                self.colors[v] = c;
                if self.separator_colorings(sep, s, i + 1, depth)? {
                    return Ok(true);
                }
            }
        }
        self.colors[v] = UNCOLORED;
        Ok(false)
    }

    fn backtrack(&mut self, nodes: &[usize], i: usize) -> bool {
        if i == nodes.len() {
            return true;
        }
        let v = nodes[i];
        let forbid = self.forbidden(v);
        for c in 0..self.q {
            if forbid >> c & 1 == 0 {
                self.colors[v] = c;
                if self.backtrack(nodes, i + 1) {
                    return true;
                }
            }
        }
        self.colors[v] = UNCOLORED;
        false
    }
}

/// Proper colouring with `q` colours, or `None`. Graphs containing a clique of `q + 1`
/// nodes are rejected first; otherwise every colouring of the separator nodes is tried
/// and the sides are coloured with the separator colours fixed.
pub fn solve_qcoloring(g: &Graph, oracle: &dyn SeparatorOracle, q: usize, base_n: usize) -> Result<ColoringOutcome, SolverError> {
    if q == 0 || q > 32 {
        return Err(SolverError::BadQ);
    }
    let mut stats = SolveStats::default();
    if find_clique(g, q + 1).is_some() {
        return Ok(ColoringOutcome { coloring: None, stats });
    }
    let mut s = Coloring {
        g,
        oracle,
        q: q as u8,
        base_n,
        cap: depth_cap(g.n()),
        colors: vec![UNCOLORED; g.n()],
        failed: Default::default(),
        stats: std::mem::take(&mut stats),
    };
    let all: Vec<usize> = (0..g.n()).collect();
    let ok = s.solve(&all, 0)?;
    Ok(ColoringOutcome { coloring: ok.then(|| s.colors.clone()), stats: s.stats })
}

fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect()
}

/// Maximum independent set by exhaustive branching on the lowest node.
pub fn brute_mis(g: &Graph) -> Result<Vec<usize>, SolverError> {
    if g.n() > BRUTE_MIS_MAX {
        return Err(SolverError::TooLarge { n: g.n(), cap: BRUTE_MIS_MAX });
    }
    let adj = masks(g);
    fn go(adj: &[u32], set: u32) -> u32 {
        if set == 0 {
            return 0;
        }
        let v = set.trailing_zeros() as usize;
        let with = 1 << v | go(adj, set & !(1 << v) & !adj[v]);
        if adj[v] & set == 0 {
            return with;
        }
        let without = go(adj, set & !(1 << v));
        if without.count_ones() > with.count_ones() {
            without
        } else {
            with
        }
    }
    let full = if g.n() == 32 { u32::MAX } else { (1u32 << g.n()) - 1 };
    let best = go(&adj, full);
    Ok((0..g.n()).filter(|&v| best >> v & 1 == 1).collect())
}

/// Maximum induced forest over all node subsets.
pub fn brute_mif(g: &Graph) -> Result<Vec<usize>, SolverError> {
    let n = g.n();
    if n > BRUTE_MIF_MAX {
        return Err(SolverError::TooLarge { n, cap: BRUTE_MIF_MAX });
    }
    let edges = g.edges();
    let mut best = 0u32;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() <= best.count_ones() {
            continue;
        }
        let mut uf = UnionFind::new(n);
        if edges.iter().filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).all(|&(u, v)| uf.union(u, v)) {
            best = mask;
        }
    }
    Ok((0..n).filter(|&v| best >> v & 1 == 1).collect())
}

/// Proper `q`-colouring by exhaustive backtracking, or `None`.
pub fn brute_coloring(g: &Graph, q: usize) -> Result<Option<Vec<u8>>, SolverError> {
    let n = g.n();
    if n > BRUTE_COLORING_MAX {
        return Err(SolverError::TooLarge { n, cap: BRUTE_COLORING_MAX });
    }
    if q == 0 {
        return Ok((n == 0).then(Vec::new));
    }
    fn go(g: &Graph, q: u8, v: usize, colors: &mut Vec<u8>) -> bool {
        if v == colors.len() {
            return true;
        }
        for c in 0..q {
            if g.neighbors(v).iter().all(|&w| w >= v || colors[w] != c) {
                colors[v] = c;
                if go(g, q, v + 1, colors) {
                    return true;
                }
            }
        }
        false
    }
    let mut colors = vec![0u8; n];
    Ok(go(g, q.min(255) as u8, 0, &mut colors).then_some(colors))
}

/// Smallest `q` with a proper `q`-colouring.
pub fn brute_chromatic(g: &Graph) -> Result<usize, SolverError> {
    for q in 0..=g.n() {
        if brute_coloring(g, q)?.is_some() {
            return Ok(q);
        }
    }
    Ok(g.n())
}

pub fn is_forest(g: &Graph, nodes: &[usize]) -> bool {
    g.induced(nodes).map(|h| h.is_acyclic()).unwrap_or(false)
}

pub fn is_proper_coloring(g: &Graph, colors: &[u8], q: usize) -> bool {
    colors.len() == g.n() && colors.iter().all(|&c| (c as usize) < q) && g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{disks_to_rings, random_disks, random_vis_instance, voronoi_map};
    use crate::map_sep::MapInstance;
    use crate::oracle::{MapOracle, PseudoDiskOracle, VisOracle};

    /// Splits by node id halves with no cliques; only valid on graphs without crossing edges.
    struct Halves(Graph);

    impl SeparatorOracle for Halves {
        fn graph(&self) -> &Graph {
            &self.0
        }
        fn separate(&self, nodes: &[usize], _: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, String> {
            let mid = nodes.len() / 2;
            Ok(CliqueSeparator::new(vec![vec![nodes[mid]]], nodes[..mid].to_vec(), nodes[mid + 1..].to_vec()))
        }
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let e: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    fn petersen() -> Graph {
        let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        e.extend((0..5).map(|i| (i, i + 5)));
        e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        Graph::from_edges(10, &e).unwrap()
    }

    #[test]
    fn trivial_examples() {
        let k5 = Halves(complete(5));
        assert_eq!(solve_mis(&k5.0, &k5, 20).unwrap().nodes.len(), 1);
        let p3 = Halves(path(3));
        assert_eq!(solve_mis(&p3.0, &p3, 20).unwrap().nodes, vec![0, 2]);
        let c4 = Halves(cycle(4));
        assert_eq!(solve_mif(&c4.0, &c4, 14).unwrap().nodes.len(), 3);
        let tree = Halves(path(9));
        assert_eq!(solve_mif(&tree.0, &tree, 14).unwrap().nodes.len(), 9);
        let c5 = Halves(cycle(5));
        assert!(solve_qcoloring(&c5.0, &c5, 2, 18).unwrap().coloring.is_none());
        let col = solve_qcoloring(&c5.0, &c5, 3, 18).unwrap().coloring.unwrap();
        assert!(is_proper_coloring(&c5.0, &col, 3));
    }

    #[test]
    fn divide_and_conquer_on_paths() {
        let p = Halves(path(40));
        let s = solve_mis(&p.0, &p, 3).unwrap();
        assert_eq!(s.nodes.len(), 20);
        assert!(s.stats.oracle_calls > 0);
        let p = Halves(path(12));
        let s = solve_mif(&p.0, &p, 2).unwrap();
        assert_eq!(s.nodes.len(), 12);
        let c = solve_qcoloring(&p.0, &p, 2, 2).unwrap().coloring.unwrap();
        assert!(is_proper_coloring(&p.0, &c, 2));
    }

    #[test]
    fn brute_examples() {
        let e = Graph::empty(5);
        assert_eq!(brute_mis(&e).unwrap().len(), 5);
        assert_eq!(brute_mif(&e).unwrap().len(), 5);
        assert!(brute_coloring(&e, 1).unwrap().is_some());
        let k4 = complete(4);
        assert_eq!(brute_mis(&k4).unwrap().len(), 1);
        assert_eq!(brute_mif(&k4).unwrap().len(), 2);
        assert!(brute_coloring(&k4, 3).unwrap().is_none());
        assert!(brute_coloring(&k4, 4).unwrap().is_some());
        let p = petersen();
        assert_eq!(brute_mis(&p).unwrap().len(), 4);
        assert!(brute_coloring(&p, 3).unwrap().is_some());
        assert_eq!(brute_chromatic(&p).unwrap(), 3);
        assert!(brute_mis(&Graph::empty(26)).is_err());
    }

    #[test]
    fn clique_precheck() {
        assert_eq!(find_clique(&complete(5), 4).map(|c| c.len()), Some(4));
        assert!(find_clique(&petersen(), 3).is_none());
    }

    fn agree(o: &dyn SeparatorOracle) {
        let g = o.graph();
        let mis = solve_mis(g, o, 4).unwrap();
        assert!(g.is_independent(&mis.nodes));
        assert_eq!(mis.nodes.len(), brute_mis(g).unwrap().len());
        if g.n() <= BRUTE_MIF_MAX {
            let mif = solve_mif(g, o, 4).unwrap();
            assert!(is_forest(g, &mif.nodes));
            assert_eq!(mif.nodes.len(), brute_mif(g).unwrap().len());
        }
        for q in 2..=4 {
            let c = solve_qcoloring(g, o, q, 4).unwrap();
            let b = brute_coloring(g, q).unwrap();
            assert_eq!(c.coloring.is_some(), b.is_some(), "q={}", q);
            if let Some(col) = c.coloring {
                assert!(is_proper_coloring(g, &col, q));
            }
        }
    }

    #[test]
    fn geometric_oracles_agree_with_brute_force() {
        for seed in 0..3 {
            agree(&MapOracle::new(&MapInstance::new(voronoi_map(14, seed)).unwrap()));
            agree(&PseudoDiskOracle::new(disks_to_rings(&random_disks(14, 3.0, seed), 16)));
            agree(&VisOracle::new(random_vis_instance(14, 1, seed)));
        }
    }
}
