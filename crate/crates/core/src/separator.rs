//! The clique-based separator contract shared by every graph class.

use crate::graph::Graph;

/// Node-disjoint cliques plus the two sides they separate.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueSeparator {
    pub cliques: Vec<Vec<usize>>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub weight: f64,
}

/// `sum over C of log2(|C| + 1)`.
pub fn clique_weight(cliques: &[Vec<usize>]) -> f64 {
    cliques.iter().fold(0.0, |w, c| w + ((c.len() + 1) as f64).log2())
}

impl CliqueSeparator {
    pub fn new(cliques: Vec<Vec<usize>>, a: Vec<usize>, b: Vec<usize>) -> Self {
        let mut cliques: Vec<Vec<usize>> = cliques.into_iter().filter(|c| !c.is_empty()).collect();
        for c in &mut cliques {
            c.sort_unstable();
        }
        let mut a = a;
        let mut b = b;
        a.sort_unstable();
        b.sort_unstable();
        let weight = clique_weight(&cliques);
        CliqueSeparator { cliques, a, b, weight }
    }

    pub fn empty() -> Self {
        CliqueSeparator::new(Vec::new(), Vec::new(), Vec::new())
    }

    pub fn separator_nodes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.cliques.iter().flatten().copied().collect();
        s.sort_unstable();
        s
    }

    pub fn size(&self) -> usize {
        self.cliques.iter().map(|c| c.len()).sum()
    }

    /// Maps every id through `f` (used when a separator was computed on a relabelled subset).
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> CliqueSeparator {
        CliqueSeparator::new(
            self.cliques.iter().map(|c| c.iter().map(|&v| f(v)).collect()).collect(),
            self.a.iter().map(|&v| f(v)).collect(),
            self.b.iter().map(|&v| f(v)).collect(),
        )
    }
}

/// Removes ids already used by an earlier clique so the cliques become disjoint.
pub fn dedup_cliques(cliques: Vec<Vec<usize>>, n: usize) -> Vec<Vec<usize>> {
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for c in cliques {
        let mut kept = Vec::new();
        for v in c {
            if !used[v] {
                used[v] = true;
                kept.push(v);
            }
        }
        if !kept.is_empty() {
            kept.sort_unstable();
            out.push(kept);
        }
    }
    out
}

/// Greedily merges cliques whose union is still a clique, largest first.
pub fn merge_cliques(g: &Graph, cliques: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut cs = cliques;
    cs.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for c in cs {
        let target = out
            .iter()
            .position(|o| c.iter().all(|&u| o.iter().all(|&v| g.has_edge(u, v))));
        match target {
            Some(i) => {
                out[i].extend(c);
                out[i].sort_unstable();
            }
            None => out.push(c),
        }
    }
    out.sort();
    out
}

/// Splits whole components into two sides, each of weight at most two thirds of the total,
/// assuming no single component exceeds that bound.
pub fn split_components(comps: &[Vec<usize>], weight: &dyn Fn(usize) -> u64) -> (Vec<usize>, Vec<usize>) {
    let total: u64 = comps.iter().flatten().map(|&v| weight(v)).sum();
    let cw = |c: &Vec<usize>| c.iter().map(|&v| weight(v)).sum::<u64>();
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(cw(&comps[i])), std::cmp::Reverse(comps[i].len()), i));
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let (mut wa, mut wb) = (0u64, 0u64);
    if let Some(&first) = order.first() {
        if 3 * cw(&comps[first]) >= total {
            a.extend_from_slice(&comps[first]);
            for &i in &order[1..] {
                b.extend_from_slice(&comps[i]);
            }
            a.sort_unstable();
            b.sort_unstable();
            return (a, b);
        }
    }
    for &i in &order {
        let w = cw(&comps[i]);
        let size_key = |wx: u64, side: &Vec<usize>| (wx, side.len());
        if size_key(wa, &a) <= size_key(wb, &b) {
            a.extend_from_slice(&comps[i]);
            wa += w;
        } else {
            b.extend_from_slice(&comps[i]);
            wb += w;
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    (a, b)
}

/// Weight function that falls back to uniform weights when every given weight is zero.
pub fn effective_weights(ids: &[usize], weight: &dyn Fn(usize) -> u64) -> Vec<u64> {
    let w: Vec<u64> = ids.iter().map(|&v| weight(v)).collect();
    if w.iter().all(|&x| x == 0) {
        vec![1; ids.len()]
    } else {
        w
    }
}

/// Runs `separate` on the single heavy component if one exists (weight above two thirds)
/// and distributes the other components to the lighter side; otherwise returns an
/// empty separator with a component bipartition.
pub fn with_component_balancing<E>(
    comps: Vec<Vec<usize>>,
    weight: &dyn Fn(usize) -> u64,
    separate: impl FnOnce(&[usize]) -> Result<CliqueSeparator, E>,
) -> Result<CliqueSeparator, E> {
    let all: Vec<usize> = comps.iter().flatten().copied().collect();
    let uniform = all.iter().all(|&v| weight(v) == 0);
    let w = |v: usize| if uniform { 1 } else { weight(v) };
    let total: u64 = all.iter().map(|&v| w(v)).sum();
    let heavy = comps
        .iter()
        .position(|c| 3 * c.iter().map(|&v| w(v)).sum::<u64>() > 2 * total);
    match heavy {
        None => {
            let (a, b) = split_components(&comps, &w);
            Ok(CliqueSeparator::new(Vec::new(), a, b))
        }
        Some(h) => {
            let sep = separate(&comps[h])?;
            let wa: u64 = sep.a.iter().map(|&v| w(v)).sum();
            let wb: u64 = sep.b.iter().map(|&v| w(v)).sum();
            let (mut a, mut b) = (sep.a, sep.b);
            let mut rest: Vec<&Vec<usize>> = comps.iter().enumerate().filter(|(i, _)| *i != h).map(|(_, c)| c).collect();
            rest.sort_by_key(|c| c[0]);
            let (mut wa, mut wb) = (wa, wb);
            for c in rest {
                let cw: u64 = c.iter().map(|&v| w(v)).sum();
                if (wa, a.len()) <= (wb, b.len()) {
                    a.extend_from_slice(c);
                    wa += cw;
                } else {
                    b.extend_from_slice(c);
                    wb += cw;
                }
            }
            Ok(CliqueSeparator::new(sep.cliques, a, b))
        }
    }
}

/// Independent audit of a separator against an explicit graph; ids are graph node ids.
/// `population` weights are used for the balance check.
pub fn audit(g: &Graph, sep: &CliqueSeparator, population: &dyn Fn(usize) -> u64) -> Result<(), String> {
    let n = g.n();
    let mut side = vec![0u8; n];
    for (ci, c) in sep.cliques.iter().enumerate() {
        if c.is_empty() {
            return Err(format!("clique {} is empty", ci));
        }
        for &v in c {
            if v >= n {
                return Err(format!("unknown id {}", v));
            }
            if side[v] != 0 {
                return Err(format!("node {} appears twice", v));
            }
            side[v] = 1;
        }
        if !g.is_clique(c) {
            return Err(format!("clique {} is not a clique", ci));
        }
    }
    for (set, tag) in [(&sep.a, 2u8), (&sep.b, 3u8)] {
        for &v in set {
            if v >= n {
                return Err(format!("unknown id {}", v));
            }
            if side[v] != 0 {
                return Err(format!("node {} appears twice", v));
            }
            side[v] = tag;
        }
    }
    if let Some(v) = side.iter().position(|&s| s == 0) {
        return Err(format!("node {} not covered", v));
    }
    for (u, v) in g.edges() {
        if side[u] * side[v] == 6 {
            return Err(format!("edge {}-{} joins A and B", u, v));
        }
    }
    let total: u64 = (0..n).map(population).sum();
    let wa: u64 = sep.a.iter().map(|&v| population(v)).sum();
    let wb: u64 = sep.b.iter().map(|&v| population(v)).sum();
    if 3 * wa > 2 * total || 3 * wb > 2 * total {
        return Err(format!("unbalanced: |A|={} |B|={} of {}", wa, wb, total));
    }
    let w = clique_weight(&sep.cliques);
    if (w - sep.weight).abs() > 1e-9 * (1.0 + w) {
        return Err("weight mismatch".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_formula() {
        let s = CliqueSeparator::new(vec![vec![0], vec![1, 2, 3]], vec![], vec![]);
        assert!((s.weight - 3.0).abs() < 1e-12);
    }

    #[test]
    fn merges_into_one_clique() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(merge_cliques(&g, vec![vec![0], vec![2, 3], vec![1]]), vec![vec![0, 1, 2, 3]]);
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(merge_cliques(&path, vec![vec![0], vec![2]]).len(), 2);
    }

    #[test]
    fn component_split_is_balanced() {
        let comps: Vec<Vec<usize>> = (0..10).map(|i| vec![i]).collect();
        let (a, b) = split_components(&comps, &|_| 1);
        assert!(a.len() <= 6 && b.len() <= 6 && a.len() + b.len() == 10);
        let comps = vec![vec![0, 1, 2, 3, 4], vec![5, 6], vec![7, 8, 9]];
        let (a, b) = split_components(&comps, &|_| 1);
        assert_eq!(a, vec![0, 1, 2, 3, 4]);
        assert_eq!(b.len(), 5);
    }

    #[test]
    fn audit_catches_moved_member() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let good = CliqueSeparator::new(vec![vec![1]], vec![0], vec![2]);
        audit(&g, &good, &|_| 1).unwrap();
        let bad = CliqueSeparator::new(vec![], vec![0, 1], vec![2]);
        assert!(audit(&g, &bad, &|_| 1).unwrap_err().contains("joins A and B"));
        let mut corrupt = good.clone();
        corrupt.weight = 7.0;
        assert_eq!(audit(&g, &corrupt, &|_| 1).unwrap_err(), "weight mismatch");
    }
}
