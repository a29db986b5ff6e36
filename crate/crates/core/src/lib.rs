//! Clique-based separators for geometric intersection graphs and the
//! separator-driven exact solvers built on them.

pub mod geom;
pub mod graph;
pub mod planar;
pub mod separator;
pub mod map_sep;
pub mod gen;
pub mod arrangement;
pub mod support_sep;
pub mod geodesic;
pub mod vis;
pub mod oracle;
pub mod solvers;
pub mod io;
pub mod verify;
