//! JSON file formats and per-class dispatch.
//!
//! Coordinates are written as strings: integers, terminating decimals or `num/den`
//! fractions. JSON integers are accepted on input.

use serde::{Deserialize, Serialize};

use crate::geodesic::{geodisk_graph, geodisk_separator_tol, GeodesicPolygon, DEFAULT_TOL_DIV};
use crate::geom::{Coord, Point, PolygonWithHoles};
use crate::graph::Graph;
use crate::map_sep::{build_map_graph, map_separator, MapInstance};
use crate::separator::CliqueSeparator;
use crate::support_sep::{check_pseudo_disks, intersection_graph, pseudodisk_separator};
use crate::vis::{build_vis_graph, vis_separator, VisInstance};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("bad coordinate {0:?}")]
    Coordinate(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("no geometric separator for abstract class")]
    AbstractClass,
    #[error("separator failed: {0}")]
    Separator(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordText {
    Int(i64),
    Text(String),
}

impl CoordText {
    pub fn parse(&self) -> Result<Coord, IoError> {
        match self {
            CoordText::Int(v) => Ok(Coord::from_int(*v)),
            CoordText::Text(s) => s.parse().map_err(|_| IoError::Coordinate(s.clone())),
        }
    }
}

impl From<&Coord> for CoordText {
    fn from(c: &Coord) -> Self {
        CoordText::Text(c.to_string())
    }
}

pub type PointText = [CoordText; 2];

fn point_text(p: &Point) -> PointText {
    [p.x().into(), p.y().into()]
}

fn parse_point(p: &PointText) -> Result<Point, IoError> {
    Ok(Point::new(p[0].parse()?, p[1].parse()?))
}

fn parse_ring(r: &[PointText]) -> Result<Vec<Point>, IoError> {
    r.iter().map(parse_point).collect()
}

fn ring_text(r: &[Point]) -> Vec<PointText> {
    r.iter().map(point_text).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonText {
    pub outer: Vec<PointText>,
    #[serde(default)]
    pub holes: Vec<Vec<PointText>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskText {
    pub center: PointText,
    pub radius: CoordText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum Payload {
    Map { regions: Vec<Vec<PointText>> },
    Pseudodisk { objects: Vec<Vec<PointText>> },
    Geodesic { polygon: Vec<PointText>, disks: Vec<DiskText> },
    Visibility { polygon: PolygonText, points: Vec<PointText> },
    Abstract { n: usize, edges: Vec<[usize; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub payload: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

/// A validated instance with exact geometry.
#[derive(Debug, Clone)]
pub enum Instance {
    Map(MapInstance),
    PseudoDisk(Vec<Vec<Point>>),
    Geodesic { polygon: GeodesicPolygon, disks: Vec<(Point, Coord)> },
    Visibility(VisInstance),
    Abstract(Graph),
}

impl Instance {
    pub fn class(&self) -> &'static str {
        match self {
            Instance::Map(_) => "map",
            Instance::PseudoDisk(_) => "pseudodisk",
            Instance::Geodesic { .. } => "geodesic",
            Instance::Visibility(_) => "visibility",
            Instance::Abstract(_) => "abstract",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Map(m) => m.n(),
            Instance::PseudoDisk(r) => r.len(),
            Instance::Geodesic { disks, .. } => disks.len(),
            Instance::Visibility(v) => v.n(),
            Instance::Abstract(g) => g.n(),
        }
    }

    /// Exact intersection graph.
    pub fn graph(&self) -> Result<Graph, IoError> {
        Ok(match self {
            Instance::Map(m) => build_map_graph(m),
            Instance::PseudoDisk(r) => intersection_graph(r),
            Instance::Geodesic { polygon, disks } => geodisk_graph(disks, polygon).map_err(|e| IoError::Invalid(e.to_string()))?,
            Instance::Visibility(v) => build_vis_graph(v),
            Instance::Abstract(g) => g.clone(),
        })
    }

    pub fn to_file(&self, seed: Option<u64>, meta: Option<serde_json::Value>) -> InstanceFile {
        let payload = match self {
            Instance::Map(m) => Payload::Map { regions: m.regions.iter().map(|r| ring_text(&r.boundary)).collect() },
            Instance::PseudoDisk(r) => Payload::Pseudodisk { objects: r.iter().map(|x| ring_text(x)).collect() },
            Instance::Geodesic { polygon, disks } => Payload::Geodesic {
                polygon: ring_text(polygon.ring()),
                disks: disks.iter().map(|(c, r)| DiskText { center: point_text(c), radius: r.into() }).collect(),
            },
            Instance::Visibility(v) => Payload::Visibility {
                polygon: PolygonText { outer: ring_text(&v.poly.outer), holes: v.poly.holes.iter().map(|h| ring_text(h)).collect() },
                points: v.points.iter().map(point_text).collect(),
            },
            Instance::Abstract(g) => Payload::Abstract { n: g.n(), edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect() },
        };
        InstanceFile { payload, seed, meta }
    }
}

impl InstanceFile {
    pub fn class(&self) -> &'static str {
        match self.payload {
            Payload::Map { .. } => "map",
            Payload::Pseudodisk { .. } => "pseudodisk",
            Payload::Geodesic { .. } => "geodesic",
            Payload::Visibility { .. } => "visibility",
            Payload::Abstract { .. } => "abstract",
        }
    }

    /// Parses and validates the geometry.
    pub fn instance(&self) -> Result<Instance, IoError> {
        let invalid = |e: &dyn std::fmt::Display| IoError::Invalid(e.to_string());
        Ok(match &self.payload {
            Payload::Map { regions } => {
                let rings = regions.iter().map(|r| parse_ring(r)).collect::<Result<Vec<_>, _>>()?;
                Instance::Map(MapInstance::new(rings).map_err(|e| invalid(&e))?)
            }
            Payload::Pseudodisk { objects } => {
                let rings = objects.iter().map(|r| parse_ring(r)).collect::<Result<Vec<_>, _>>()?;
                for r in &rings {
                    crate::geom::PolygonalRegion::new(0, r.clone()).map_err(|e| invalid(&e))?;
                }
                check_pseudo_disks(&rings).map_err(|e| invalid(&e))?;
                Instance::PseudoDisk(rings)
            }
            Payload::Geodesic { polygon, disks } => {
                let gp = GeodesicPolygon::new(parse_ring(polygon)?).map_err(|e| invalid(&e))?;
                let disks = disks.iter().map(|d| Ok((parse_point(&d.center)?, d.radius.parse()?))).collect::<Result<Vec<_>, IoError>>()?;
                for (c, r) in &disks {
                    if !gp.contains(c) {
                        return Err(IoError::Invalid("disk center outside the polygon".into()));
                    }
                    if r.signum() <= 0 {
                        return Err(IoError::Invalid("radius must be positive".into()));
                    }
                }
                Instance::Geodesic { polygon: gp, disks }
            }
            Payload::Visibility { polygon, points } => {
                let holes = polygon.holes.iter().map(|h| parse_ring(h)).collect::<Result<Vec<_>, _>>()?;
                let poly = PolygonWithHoles::new(parse_ring(&polygon.outer)?, holes).map_err(|e| invalid(&e))?;
                let pts = points.iter().map(parse_point).collect::<Result<Vec<_>, _>>()?;
                Instance::Visibility(VisInstance::new(poly, pts).map_err(|e| invalid(&e))?)
            }
            Payload::Abstract { n, edges } => {
                let e: Vec<(usize, usize)> = edges.iter().map(|&[u, v]| (u, v)).collect();
                Instance::Abstract(Graph::from_edges(*n, &e).map_err(|e| invalid(&e))?)
            }
        })
    }
}

/// Separator file: the cliques and sides plus summary fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatorFile {
    pub class: String,
    pub cliques: Vec<Vec<usize>>,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    pub weight: f64,
    pub num_cliques: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl SeparatorFile {
    pub fn new(class: &str, s: &CliqueSeparator, details: Option<serde_json::Value>) -> Self {
        SeparatorFile {
            class: class.to_string(),
            cliques: s.cliques.clone(),
            a: s.a.clone(),
            b: s.b.clone(),
            weight: s.weight,
            num_cliques: s.cliques.len(),
            size_a: s.a.len(),
            size_b: s.b.len(),
            verified: false,
            details,
        }
    }

    /// The separator as listed, keeping the stated weight.
    pub fn separator(&self) -> CliqueSeparator {
        CliqueSeparator { cliques: self.cliques.clone(), a: self.a.clone(), b: self.b.clone(), weight: self.weight }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SepOptions {
    /// Initial tolerance divisor for geodesic disks.
    pub tol_div: Option<u64>,
}

/// Separator for any geometric class, with class-specific details.
pub fn separate(inst: &Instance, opts: &SepOptions) -> Result<(CliqueSeparator, serde_json::Value), IoError> {
    let err = |e: &dyn std::fmt::Display| IoError::Separator(e.to_string());
    Ok(match inst {
        Instance::Map(m) => (map_separator(m).map_err(|e| err(&e))?, serde_json::json!({})),
        Instance::PseudoDisk(r) => {
            let res = pseudodisk_separator(r, true).map_err(|e| err(&e))?;
            let details = serde_json::json!({
                "ply_threshold": res.threshold,
                "peeled": res.peeled.cliques.iter().map(|c| c.len()).sum::<usize>(),
                "residual": res.peeled.residual.len(),
                "residual_ply": res.peeled.residual_ply,
            });
            (res.separator, details)
        }
        Instance::Geodesic { polygon, disks } => {
            let res = geodisk_separator_tol(disks, polygon, opts.tol_div.unwrap_or(DEFAULT_TOL_DIV)).map_err(|e| err(&e))?;
            (res.separator, serde_json::json!({"tol_div": res.tol_div, "attempts": res.attempts}))
        }
        Instance::Visibility(v) => {
            let res = vis_separator(v).map_err(|e| err(&e))?;
            let mut details = serde_json::json!({
                "q1": res.reflex.q1.len(),
                "q2": res.reflex.q2.len(),
                "reflex_repairs": res.reflex.repairs,
            });
            if let (Some(fam), Some(k)) = (&res.family, res.chosen) {
                details["lines"] = fam.lines.len().into();
                details["chosen_line"] = k.into();
                details["line_weight_sum"] = fam.total_weight().into();
                details["rotation_steps"] = fam.rotation_steps.into();
                details["outside_line_max"] = fam.outside_line_count(&v.points).into();
                details["non_entrance_pieces"] = fam.lines.iter().map(|l| l.non_entrance).sum::<usize>().into();
            }
            if let Some(c) = &res.center {
                details["centerpoint_exact"] = c.exact.into();
                details["centerpoint_verified"] = c.verified.into();
            }
            (res.separator, details)
        }
        Instance::Abstract(_) => return Err(IoError::AbstractClass),
    })
}
