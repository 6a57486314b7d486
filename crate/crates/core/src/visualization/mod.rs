//! Boundary faceting with material-driven refinement, color mapping and
//! colored PLY export.

pub mod color;
pub mod facet;
pub mod ply;

pub use color::{map_color, ColorMap, ColorMode};
pub use facet::{facet_boundary, ColoredMesh, FacetOptions, FacetResult, MAX_SPLIT_DEPTH};
pub use ply::{colored_ply_string, export_colored_mesh, import_colored_mesh};
