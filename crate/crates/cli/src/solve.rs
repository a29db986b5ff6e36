//! Solver dispatch with per-class oracles and certificate checks.

use std::time::Instant;

use cliquesep::graph::Graph;
use cliquesep::io::{Instance, IoError};
use cliquesep::oracle::{AbstractOracle, GeodesicOracle, MapOracle, PseudoDiskOracle, SeparatorOracle, VisOracle};
use cliquesep::solvers::{is_forest, is_proper_coloring, solve_mif, solve_mis, solve_qcoloring, COLORING_BASE_N, MIF_BASE_N, MIS_BASE_N};
use cliquesep::verify::brute_graph;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Mis,
    Fvs,
    Coloring(usize),
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Mis => "mis",
            Problem::Fvs => "fvs",
            Problem::Coloring(_) => "coloring",
        }
    }

    pub fn default_base_n(&self) -> usize {
        match self {
            Problem::Mis => MIS_BASE_N,
            Problem::Fvs => MIF_BASE_N,
            Problem::Coloring(_) => COLORING_BASE_N,
        }
    }
}

/// Solver results. `value` is the set size for MIS and FVS and whether a coloring exists
/// for q-coloring; `certificate` is the node set or the color of every node.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub problem: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    pub value: serde_json::Value,
    pub certificate: serde_json::Value,
    pub verified: Option<bool>,
    pub nodes_expanded: u64,
    pub oracle_calls: u64,
    pub fallbacks: u64,
    pub wall_time_ms: Option<u64>,
}

pub fn oracle_for(inst: &Instance) -> Result<Box<dyn SeparatorOracle>, IoError> {
    Ok(match inst {
        Instance::Map(m) => Box::new(MapOracle::new(m)),
        Instance::PseudoDisk(r) => Box::new(PseudoDiskOracle::new(r.clone())),
        Instance::Geodesic { polygon, disks } => Box::new(GeodesicOracle::new(polygon.clone(), disks.clone()).map_err(IoError::Separator)?),
        Instance::Visibility(v) => Box::new(VisOracle::new(v.clone())),
        Instance::Abstract(g) => Box::new(AbstractOracle::new(g.clone())),
    })
}

/// Checks a certificate against `g`, which should come from [`brute_graph`].
pub fn check_certificate(g: &Graph, problem: Problem, certificate: &serde_json::Value) -> bool {
    let n = g.n();
    match problem {
        Problem::Mis | Problem::Fvs => {
            let Ok(set) = serde_json::from_value::<Vec<usize>>(certificate.clone()) else { return false };
            if set.iter().any(|&v| v >= n) || set.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if problem == Problem::Mis {
                g.is_independent(&set)
            } else {
                let rest: Vec<usize> = (0..n).filter(|v| set.binary_search(v).is_err()).collect();
                is_forest(g, &rest)
            }
        }
        Problem::Coloring(q) => match certificate {
            serde_json::Value::Null => true,
            c => serde_json::from_value::<Vec<u8>>(c.clone()).is_ok_and(|col| col.len() == n && is_proper_coloring(g, &col, q)),
        },
    }
}

pub fn solve(inst: &Instance, problem: Problem, base_n: Option<usize>, verify: bool, timing: bool) -> Result<SolveReport, IoError> {
    let oracle = oracle_for(inst)?;
    let g = oracle.graph();
    let base_n = base_n.unwrap_or_else(|| problem.default_base_n());
    let err = |e: &dyn std::fmt::Display| IoError::Separator(e.to_string());
    let start = Instant::now();
    let (value, certificate, stats) = match problem {
        Problem::Mis => {
            let s = solve_mis(g, oracle.as_ref(), base_n).map_err(|e| err(&e))?;
            (s.nodes.len().into(), serde_json::json!(s.nodes), s.stats)
        }
        Problem::Fvs => {
            let s = solve_mif(g, oracle.as_ref(), base_n).map_err(|e| err(&e))?;
            let fvs: Vec<usize> = (0..g.n()).filter(|v| s.nodes.binary_search(v).is_err()).collect();
            (fvs.len().into(), serde_json::json!(fvs), s.stats)
        }
        Problem::Coloring(q) => {
            let s = solve_qcoloring(g, oracle.as_ref(), q, base_n).map_err(|e| err(&e))?;
            (s.coloring.is_some().into(), serde_json::json!(s.coloring), s.stats)
        }
    };
    let wall = start.elapsed().as_millis() as u64;
    let verified = if verify { Some(check_certificate(&brute_graph(inst)?, problem, &certificate)) } else { None };
    Ok(SolveReport {
        problem: problem.name().to_string(),
        q: match problem {
            Problem::Coloring(q) => Some(q),
            _ => None,
        },
        value,
        certificate,
        verified,
        nodes_expanded: stats.nodes_expanded,
        oracle_calls: stats.oracle_calls,
        fallbacks: stats.fallbacks,
        wall_time_ms: timing.then_some(wall),
    })
}
