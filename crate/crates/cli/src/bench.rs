//! Scaling benchmark: separator weight over instance sizes and seeds.

use std::time::Instant;

use cliquesep::arrangement::Arrangement;
use cliquesep::io::{separate, Instance, SepOptions};
use cliquesep::support_sep::pseudodisk_separator;
use cliquesep::verify::{balance_population, verify};
use rayon::prelude::*;
use serde::Serialize;

use crate::generate::{generate, GenSpec, DISK_DENSITY, DISK_SIDES};

pub const MIN_SIZES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchClass {
    Map,
    PseudoDisk,
    Geodesic,
    Visibility,
    Comb,
}

impl BenchClass {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "map" => BenchClass::Map,
            "pseudodisk" => BenchClass::PseudoDisk,
            "geodesic" => BenchClass::Geodesic,
            "visibility" => BenchClass::Visibility,
            "comb" => BenchClass::Comb,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BenchClass::Map => "map",
            BenchClass::PseudoDisk => "pseudodisk",
            BenchClass::Geodesic => "geodesic",
            BenchClass::Visibility => "visibility",
            BenchClass::Comb => "comb",
        }
    }

    /// Generator for size `n`: Voronoi maps, random 64-gon disks, `n` geodesic disks in a
    /// 30-gon, uniform points in a square, or the comb with `r = n`.
    pub fn spec(&self, n: usize) -> GenSpec {
        match self {
            BenchClass::Map => GenSpec::Voronoi { n },
            BenchClass::PseudoDisk => GenSpec::Disks { n, density: DISK_DENSITY, sides: DISK_SIDES },
            BenchClass::Geodesic => GenSpec::Geodesic { vertices: 30, disks: n, lo_pct: 1, hi_pct: 3 },
            BenchClass::Visibility => GenSpec::Uniform { n },
            BenchClass::Comb => GenSpec::Comb { r: n, n },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub seed: u64,
    pub weight: f64,
    pub num_cliques: usize,
    pub sep_nodes: usize,
    pub size_a: usize,
    pub size_b: usize,
    /// Heavier side over the balance population.
    pub balance: f64,
    pub verified: Option<bool>,
    pub ply_threshold: Option<usize>,
    /// Ply of the unpeeled objects, recounted on a fresh arrangement.
    pub residual_ply: Option<usize>,
    pub line_weight_sum: Option<f64>,
    pub outside_line_max: Option<usize>,
    pub wall_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SizeStats {
    pub n: usize,
    pub runs: usize,
    pub mean_weight: f64,
    pub max_weight: f64,
    pub mean_cliques: f64,
    pub max_balance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub class: String,
    pub seeds: Vec<u64>,
    /// Least-squares slope of `log2(mean weight)` against `log2(n)` over sizes with
    /// positive weight.
    pub slope: f64,
    pub intercept: f64,
    pub sizes: Vec<SizeStats>,
    pub records: Vec<BenchRecord>,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub verify: bool,
    pub timing: bool,
    pub threads: Option<usize>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { verify: true, timing: true, threads: None }
    }
}

/// Least-squares line through `(x, y)`, as `(slope, intercept)`.
pub fn fit_line(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / k, sy / k);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

pub fn run_cell(class: BenchClass, n: usize, seed: u64, opts: &BenchOptions) -> Result<BenchRecord, String> {
    let inst = generate(&class.spec(n), seed)?;
    let start = Instant::now();
    let mut rec = BenchRecord {
        n,
        seed,
        weight: 0.0,
        num_cliques: 0,
        sep_nodes: 0,
        size_a: 0,
        size_b: 0,
        balance: 0.0,
        verified: None,
        ply_threshold: None,
        residual_ply: None,
        line_weight_sum: None,
        outside_line_max: None,
        wall_ms: None,
    };
    let sep = match &inst {
        Instance::PseudoDisk(rings) => {
            let res = pseudodisk_separator(rings, true).map_err(|e| e.to_string())?;
            let residual: Vec<_> = res.peeled.residual.iter().map(|&i| rings[i].clone()).collect();
            rec.ply_threshold = Some(res.threshold);
            rec.residual_ply = Some(if residual.is_empty() { 0 } else { Arrangement::build(&residual).map_err(|e| e.to_string())?.max_ply() });
            res.separator
        }
        _ => {
            let (s, details) = separate(&inst, &SepOptions::default()).map_err(|e| e.to_string())?;
            rec.line_weight_sum = details.get("line_weight_sum").and_then(|v| v.as_f64());
            rec.outside_line_max = details.get("outside_line_max").and_then(|v| v.as_u64()).map(|v| v as usize);
            s
        }
    };
    let wall = start.elapsed().as_millis() as u64;
    let population = balance_population(&inst);
    let total: u64 = population.iter().sum();
    let side = |s: &[usize]| s.iter().map(|&v| population[v]).sum::<u64>();
    rec.weight = sep.weight;
    rec.num_cliques = sep.cliques.len();
    rec.sep_nodes = sep.size();
    rec.size_a = sep.a.len();
    rec.size_b = sep.b.len();
    rec.balance = if total == 0 { 0.0 } else { side(&sep.a).max(side(&sep.b)) as f64 / total as f64 };
    if opts.verify {
        rec.verified = Some(verify(&inst, &sep).map_err(|e| e.to_string())?.ok());
    }
    if opts.timing {
        rec.wall_ms = Some(wall);
    }
    Ok(rec)
}

pub fn bench(class: BenchClass, sizes: &[usize], seeds: &[u64], opts: &BenchOptions) -> Result<BenchReport, String> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < MIN_SIZES {
        return Err(format!("bench needs at least {} distinct sizes", MIN_SIZES));
    }
    if seeds.is_empty() {
        return Err("bench needs at least one seed".into());
    }
    let cells: Vec<(usize, u64)> = sizes.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let work = || cells.par_iter().map(|&(n, s)| run_cell(class, n, s, opts)).collect::<Result<Vec<_>, _>>();
    let records = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| e.to_string())?.install(work)?,
        None => work()?,
    };
    let stats: Vec<SizeStats> = sizes
        .iter()
        .map(|&n| {
            let rs: Vec<&BenchRecord> = records.iter().filter(|r| r.n == n).collect();
            let k = rs.len() as f64;
            SizeStats {
                n,
                runs: rs.len(),
                mean_weight: rs.iter().map(|r| r.weight).sum::<f64>() / k,
                max_weight: rs.iter().map(|r| r.weight).fold(0.0, f64::max),
                mean_cliques: rs.iter().map(|r| r.num_cliques as f64).sum::<f64>() / k,
                max_balance: rs.iter().map(|r| r.balance).fold(0.0, f64::max),
            }
        })
        .collect();
    let pts: Vec<(f64, f64)> = stats.iter().filter(|s| s.mean_weight > 0.0).map(|s| ((s.n as f64).log2(), s.mean_weight.log2())).collect();
    let (slope, intercept) = fit_line(&pts).unwrap_or((f64::NAN, f64::NAN));
    Ok(BenchReport { class: class.name().to_string(), seeds: seeds.to_vec(), slope, intercept, sizes: stats, records })
}

pub fn write_csv<W: std::io::Write>(report: &BenchReport, out: W) -> Result<(), String> {
    let mut w = csv::Writer::from_writer(out);
    for r in &report.records {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit() {
        let (s, c) = fit_line(&[(1.0, 3.0), (2.0, 3.5), (3.0, 4.0)]).unwrap();
        assert!((s - 0.5).abs() < 1e-12 && (c - 2.5).abs() < 1e-12);
        assert!(fit_line(&[(1.0, 1.0)]).is_none());
    }

    #[test]
    fn small_map_bench() {
        let opts = BenchOptions { verify: true, timing: false, threads: Some(2) };
        let r = bench(BenchClass::Map, &[16, 24, 32, 48, 64], &[0, 1], &opts).unwrap();
        assert_eq!(r.records.len(), 10);
        assert!(r.records.iter().all(|x| x.verified == Some(true) && x.balance <= 2.0 / 3.0));
        assert!(r.slope.is_finite());
        let mut buf = Vec::new();
        write_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,seed,weight,num_cliques"));
        assert_eq!(text.lines().count(), 11);
        assert!(bench(BenchClass::Map, &[16, 24], &[0], &opts).is_err());
    }
}
