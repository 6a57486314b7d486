//! Mesh representation, distance queries, subdivision, sectioning and
//! region meshing.

pub mod distance;
pub mod intersect;
pub mod io;
pub mod mesh;
pub mod primitives;
pub mod shapes;
pub mod subdivide;
pub mod triangulate;

pub use distance::{distance_to_reference, normalized_gradient_coordinate};
pub use intersect::{intersect_mesh_plane, section, Section};
pub use mesh::{edge_key, EdgeKey, TriangleMesh};
pub use shapes::{Contour2D, Plane, Polyline};
pub use subdivide::subdivide_mesh;
pub use triangulate::{triangulate_region, Mesh2D};
