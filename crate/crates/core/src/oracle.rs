//! Separator oracles: recompute a clique-based separator on a subset of the objects of an
//! instance, using the geometry of the surviving objects.

use crate::geodesic::{geodisk_graph, geodisk_separator, GeodesicPolygon};
use crate::geom::{Coord, Point};
use crate::graph::Graph;
use crate::map_sep::{build_map_graph, map_separator_weighted, MapInstance};
use crate::separator::{audit, CliqueSeparator};
use crate::support_sep::{intersection_graph, pseudodisk_separator_weighted};
use crate::vis::{build_vis_graph, vis_separator, VisInstance};

pub trait SeparatorOracle {
    /// Intersection graph of the whole instance.
    fn graph(&self) -> &Graph;

    /// Separator of the subgraph induced by `nodes`, in instance ids. Oracles that support it
    /// balance the sides with respect to `weight`; all-zero weights mean uniform.
    fn separate(&self, nodes: &[usize], weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, String>;
}

pub struct MapOracle {
    inst: MapInstance,
    graph: Graph,
}

impl MapOracle {
    pub fn new(inst: &MapInstance) -> Self {
        MapOracle { inst: inst.clone(), graph: build_map_graph(inst) }
    }
}

impl SeparatorOracle for MapOracle {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn separate(&self, nodes: &[usize], weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, String> {
        let sub = self.inst.restrict(nodes);
        let s = map_separator_weighted(&sub, &|i| weight(nodes[i])).map_err(|e| e.to_string())?;
        Ok(s.relabel(|i| nodes[i]))
    }
}

pub struct PseudoDiskOracle {
    rings: Vec<Vec<Point>>,
    graph: Graph,
}

impl PseudoDiskOracle {
    /// The rings are assumed to be pseudo-disks; subsets are not re-checked.
    pub fn new(rings: Vec<Vec<Point>>) -> Self {
        let graph = intersection_graph(&rings);
        PseudoDiskOracle { rings, graph }
    }
}

impl SeparatorOracle for PseudoDiskOracle {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn separate(&self, nodes: &[usize], weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, String> {
        let sub: Vec<Vec<Point>> = nodes.iter().map(|&v| self.rings[v].clone()).collect();
        let r = pseudodisk_separator_weighted(&sub, &|i| weight(nodes[i]), true).map_err(|e| e.to_string())?;
        Ok(r.separator.relabel(|i| nodes[i]))
    }
}

/// Separates subsets through the approximated regions of the whole instance, falling back
/// to a fresh geodesic separator when the result does not validate on the exact graph.
pub struct GeodesicOracle {
    gp: GeodesicPolygon,
    disks: Vec<(Point, Coord)>,
    rings: Vec<Vec<Point>>,
    graph: Graph,
}

impl GeodesicOracle {
    pub fn new(gp: GeodesicPolygon, disks: Vec<(Point, Coord)>) -> Result<Self, String> {
        let graph = geodisk_graph(&disks, &gp).map_err(|e| e.to_string())?;
        let sep = geodisk_separator(&disks, &gp).map_err(|e| e.to_string())?;
        let rings = sep.regions.iter().map(|d| d.boundary_approx.clone()).collect();
        Ok(GeodesicOracle { gp, disks, rings, graph })
    }
}

impl SeparatorOracle for GeodesicOracle {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn separate(&self, nodes: &[usize], weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, String> {
        let local = self.graph.induced(nodes).map_err(|e| e.to_string())?;
        let sub: Vec<Vec<Point>> = nodes.iter().map(|&v| self.rings[v].clone()).collect();
        let r = pseudodisk_separator_weighted(&sub, &|i| weight(nodes[i]), true).map_err(|e| e.to_string())?;
        if audit(&local, &r.separator, &|_| 1).is_ok() {
            return Ok(r.separator.relabel(|i| nodes[i]));
        }
        let disks: Vec<(Point, Coord)> = nodes.iter().map(|&v| self.disks[v].clone()).collect();
        let s = geodisk_separator(&disks, &self.gp).map_err(|e| e.to_string())?;
        Ok(s.separator.relabel(|i| nodes[i]))
    }
}

/// Weights are ignored: the visibility separator balances the points it does not cover.
pub struct VisOracle {
    inst: VisInstance,
    graph: Graph,
}

impl VisOracle {
    pub fn new(inst: VisInstance) -> Self {
        let graph = build_vis_graph(&inst);
        VisOracle { inst, graph }
    }
}

impl SeparatorOracle for VisOracle {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn separate(&self, nodes: &[usize], _weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, String> {
        let sub = VisInstance::new(self.inst.poly.clone(), nodes.iter().map(|&v| self.inst.points[v].clone()).collect())
            .map_err(|e| e.to_string())?;
        let s = vis_separator(&sub).map_err(|e| e.to_string())?;
        Ok(s.separator.relabel(|i| nodes[i]))
    }
}

/// Geometry-free fallback: one BFS layer of singleton cliques. Layers are numbered across
/// components in BFS order, so every layer separates the earlier layers from the later ones.
pub struct AbstractOracle {
    graph: Graph,
}

impl AbstractOracle {
    pub fn new(graph: Graph) -> Self {
        AbstractOracle { graph }
    }
}

impl SeparatorOracle for AbstractOracle {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn separate(&self, nodes: &[usize], weight: &dyn Fn(usize) -> u64) -> Result<CliqueSeparator, String> {
        let local = self.graph.induced(nodes).map_err(|e| e.to_string())?;
        let n = nodes.len();
        let w: Vec<u64> = if nodes.iter().all(|&v| weight(v) == 0) { vec![1; n] } else { nodes.iter().map(|&v| weight(v)).collect() };
        let mut layers: Vec<Vec<usize>> = Vec::new();
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut layer = vec![s];
            while !layer.is_empty() {
                let mut next = Vec::new();
                for &u in &layer {
                    for &v in local.neighbors(u) {
                        if !seen[v] {
                            seen[v] = true;
                            next.push(v);
                        }
                    }
                }
                layers.push(std::mem::replace(&mut layer, next));
            }
        }
        let total: u64 = w.iter().sum();
        let lw: Vec<u64> = layers.iter().map(|l| l.iter().map(|&v| w[v]).sum()).collect();
        let mut best: Option<usize> = None;
        let mut before = 0;
        for (k, l) in layers.iter().enumerate() {
            let after = total - before - lw[k];
            if 3 * before <= 2 * total && 3 * after <= 2 * total && best.is_none_or(|b| l.len() < layers[b].len()) {
                best = Some(k);
            }
            before += lw[k];
        }
        let Some(k) = best else {
            return Ok(CliqueSeparator::new(vec![], nodes.to_vec(), vec![]));
        };
        let pick = |r: std::ops::Range<usize>| -> Vec<usize> {
            let mut v: Vec<usize> = layers[r].iter().flatten().map(|&i| nodes[i]).collect();
            v.sort_unstable();
            v
        };
        let cliques = layers[k].iter().map(|&i| vec![nodes[i]]).collect();
        Ok(CliqueSeparator::new(cliques, pick(0..k), pick(k + 1..layers.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{disks_to_rings, random_disks, random_vis_instance, voronoi_map};

    fn check(o: &dyn SeparatorOracle) {
        let n = o.graph().n();
        let nodes: Vec<usize> = (0..n).filter(|v| v % 3 != 1).collect();
        let s = o.separate(&nodes, &|_| 1).unwrap();
        let mut all: Vec<usize> = s.separator_nodes();
        all.extend(&s.a);
        all.extend(&s.b);
        all.sort_unstable();
        assert_eq!(all, nodes);
        let local = o.graph().induced(&nodes).unwrap();
        let pos = |v: usize| nodes.binary_search(&v).unwrap();
        audit(&local, &s.relabel(pos), &|_| 0).unwrap();
    }

    #[test]
    fn subset_separators_cover_the_subset() {
        check(&MapOracle::new(&MapInstance::new(voronoi_map(60, 1)).unwrap()));
        check(&PseudoDiskOracle::new(disks_to_rings(&random_disks(40, 3.0, 2), 16)));
        check(&VisOracle::new(random_vis_instance(60, 1, 3)));
        let grid: Vec<(usize, usize)> = (0..64).flat_map(|v| [(v, v + 1), (v, v + 8)]).filter(|&(u, v)| v < 64 && (v != u + 1 || v % 8 != 0)).collect();
        check(&AbstractOracle::new(Graph::from_edges(64, &grid).unwrap()));
    }
}
