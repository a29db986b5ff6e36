//! Plain undirected graphs with dense node ids and an external label map.

use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown node id {0}")]
    UnknownNode(usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
}

/// Simple undirected graph. `labels[i]` is the external object id of node `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Vec<usize>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], labels: (0..n).collect() }
    }

    /// Builds from an edge list; duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::UnknownNode(u));
            }
            if v >= n {
                return Err(GraphError::UnknownNode(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        for a in &mut g.adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Self {
        assert_eq!(labels.len(), self.adj.len());
        self.labels = labels;
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, a) in self.adj.iter().enumerate() {
            for &v in a {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Induced subgraph on `nodes` (in the given order); node `i` of the result is `nodes[i]`
    /// and keeps its label.
    pub fn induced(&self, nodes: &[usize]) -> Result<Graph, GraphError> {
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in nodes.iter().enumerate() {
            if v >= self.n() {
                return Err(GraphError::UnknownNode(v));
            }
            pos[v] = i;
        }
        let adj = nodes
            .iter()
            .map(|&v| {
                let mut a: Vec<usize> = self.adj[v].iter().filter(|&&w| pos[w] != usize::MAX).map(|&w| pos[w]).collect();
                a.sort_unstable();
                a
            })
            .collect();
        let labels = nodes.iter().map(|&v| self.labels[v]).collect();
        Ok(Graph { adj, labels })
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.m() + self.components().len() == self.n()
    }

    /// Union of closed neighbourhoods.
    pub fn closed_neighborhood(&self, set: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.n()];
        for &v in set {
            mark[v] = true;
            for &w in &self.adj[v] {
                mark[w] = true;
            }
        }
        (0..self.n()).filter(|&v| mark[v]).collect()
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
