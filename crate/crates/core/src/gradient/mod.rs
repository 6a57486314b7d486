//! Gradient references, region bindings and point-wise material evaluation.

pub mod hybrid;
pub mod object;
pub mod offset;
pub mod reference;
pub mod region;

pub use hybrid::{hybrid_evaluate, HybridPatch, HybridRegion};
pub use object::{point_in_mesh, Cell, HeterogeneousObject, Region};
pub use offset::{OffsetContour, OffsetDirection, OffsetRegion};
pub use reference::GradientReference;
pub use region::{retarget_references, GradientRegion};
