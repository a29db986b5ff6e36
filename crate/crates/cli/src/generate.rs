//! Instance generators by class.

use cliquesep::geodesic::GeodesicPolygon;
use cliquesep::gen::{disks_to_rings, random_disks, random_geodisks, random_simple_polygon, random_vis_instance, rng, square_block, uniform_square_instance, voronoi_map};
use cliquesep::graph::Graph;
use cliquesep::io::Instance;
use cliquesep::map_sep::MapInstance;
use cliquesep::vis::gen_comb_lower_bound;
use rand::Rng;

/// Sides of the polygon that approximates each random disk.
pub const DISK_SIDES: usize = 64;
/// Expected coverage of random disk instances.
pub const DISK_DENSITY: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Voronoi { n: usize },
    MapGrid { k: usize },
    Disks { n: usize, density: f64, sides: usize },
    Geodesic { vertices: usize, disks: usize, lo_pct: i64, hi_pct: i64 },
    Points { n: usize, holes: usize },
    Uniform { n: usize },
    Comb { r: usize, n: usize },
    Petersen,
    Grid { k: usize },
    Random { n: usize, p: f64 },
}

impl GenSpec {
    pub fn class(&self) -> &'static str {
        match self {
            GenSpec::Voronoi { .. } | GenSpec::MapGrid { .. } => "map",
            GenSpec::Disks { .. } => "pseudodisk",
            GenSpec::Geodesic { .. } => "geodesic",
            GenSpec::Points { .. } | GenSpec::Uniform { .. } | GenSpec::Comb { .. } => "visibility",
            GenSpec::Petersen | GenSpec::Grid { .. } | GenSpec::Random { .. } => "abstract",
        }
    }

    pub fn meta(&self) -> serde_json::Value {
        serde_json::Value::String(format!("{:?}", self))
    }
}

fn check(ok: bool, msg: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

pub fn generate(spec: &GenSpec, seed: u64) -> Result<Instance, String> {
    Ok(match *spec {
        GenSpec::Voronoi { n } => {
            check(n >= 1, "--voronoi needs at least one site")?;
            Instance::Map(MapInstance::new(voronoi_map(n, seed)).map_err(|e| e.to_string())?)
        }
        GenSpec::MapGrid { k } => {
            check(k >= 1, "--grid needs k >= 1")?;
            Instance::Map(MapInstance::new(square_block(k as i64, 1)).map_err(|e| e.to_string())?)
        }
        GenSpec::Disks { n, density, sides } => {
            check(density > 0.0 && sides >= 3, "density must be positive and sides at least 3")?;
            Instance::PseudoDisk(disks_to_rings(&random_disks(n, density, seed), sides))
        }
        GenSpec::Geodesic { vertices, disks, lo_pct, hi_pct } => {
            check(vertices >= 3, "--vertices must be at least 3")?;
            check(lo_pct >= 1 && lo_pct <= hi_pct, "radius percentages must satisfy 1 <= lo <= hi")?;
            let polygon = GeodesicPolygon::new(random_simple_polygon(vertices, seed)).map_err(|e| e.to_string())?;
            let disks = random_geodisks(&polygon, disks, lo_pct, hi_pct, seed);
            Instance::Geodesic { polygon, disks }
        }
        GenSpec::Points { n, holes } => Instance::Visibility(random_vis_instance(n, holes, seed)),
        GenSpec::Uniform { n } => Instance::Visibility(uniform_square_instance(n, seed)),
        GenSpec::Comb { r, n } => Instance::Visibility(gen_comb_lower_bound(r, n).map_err(|e| e.to_string())?),
        GenSpec::Petersen => {
            let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
            e.extend((0..5).map(|i| (i, i + 5)));
            e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
            Instance::Abstract(Graph::from_edges(10, &e).map_err(|e| e.to_string())?)
        }
        GenSpec::Grid { k } => {
            let mut e = Vec::new();
            for y in 0..k {
                for x in 0..k {
                    let v = y * k + x;
                    if x + 1 < k {
                        e.push((v, v + 1));
                    }
                    if y + 1 < k {
                        e.push((v, v + k));
                    }
                }
            }
            Instance::Abstract(Graph::from_edges(k * k, &e).map_err(|e| e.to_string())?)
        }
        GenSpec::Random { n, p } => {
            check((0.0..=1.0).contains(&p), "edge probability must lie in [0, 1]")?;
            let mut r = rng(seed);
            let e: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| r.gen_bool(p)).collect();
            Instance::Abstract(Graph::from_edges(n, &e).map_err(|e| e.to_string())?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cliquesep::support_sep::check_pseudo_disks;

    #[test]
    fn classes_match() {
        let specs = [
            GenSpec::Voronoi { n: 10 },
            GenSpec::MapGrid { k: 3 },
            GenSpec::Disks { n: 12, density: DISK_DENSITY, sides: 16 },
            GenSpec::Geodesic { vertices: 12, disks: 8, lo_pct: 1, hi_pct: 3 },
            GenSpec::Points { n: 20, holes: 1 },
            GenSpec::Uniform { n: 20 },
            GenSpec::Comb { r: 4, n: 16 },
            GenSpec::Petersen,
            GenSpec::Grid { k: 3 },
            GenSpec::Random { n: 9, p: 0.3 },
        ];
        for s in &specs {
            let inst = generate(s, 1).unwrap();
            assert_eq!(inst.class(), s.class());
        }
    }

    #[test]
    fn generated_disks_are_pseudo_disks() {
        let Instance::PseudoDisk(r) = generate(&GenSpec::Disks { n: 50, density: DISK_DENSITY, sides: DISK_SIDES }, 3).unwrap() else { panic!() };
        check_pseudo_disks(&r).unwrap();
    }

    #[test]
    fn invalid_parameters() {
        assert!(generate(&GenSpec::Comb { r: 3, n: 9 }, 0).is_err());
        assert!(generate(&GenSpec::Random { n: 4, p: 1.5 }, 0).is_err());
        assert!(generate(&GenSpec::Geodesic { vertices: 2, disks: 3, lo_pct: 1, hi_pct: 2 }, 0).is_err());
    }
}
