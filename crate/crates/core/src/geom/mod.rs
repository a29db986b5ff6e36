//! Exact 2D kernel: rational coordinates, predicates, polygons and visibility.

mod coord;
mod point;
pub mod polygon;
pub mod segment;
pub mod visibility;

pub use coord::Coord;
pub use point::{
    angle_cmp, approx_dist, cmp_dist2, cross_sign, dist2, dot_sign, orient, strictly_ccw_between, Point,
};
pub use polygon::{point_in_polygon, Location, PolygonWithHoles, PolygonalRegion};
pub use segment::{seg_intersect, SegIntersection};
pub use visibility::{sees, visibility_polygon};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("bad coordinate `{0}`")]
    BadCoordinate(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("point outside polygon")]
    OutsidePolygon,
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
}
