//! Layer slicing: mid-layer sections, region meshing and material
//! resampling at every node, plus the stack file and per-layer SVG.

pub mod json;
pub mod stack;
pub mod svg;

pub use json::{export_slice_json, max_stack_deviation, parse_slice_json, read_slice_json, slice_json_string};
pub use stack::{generate_slices, Slice, SliceOptions, SliceStack};
pub use svg::{export_slice_svg, slice_svg_string};
