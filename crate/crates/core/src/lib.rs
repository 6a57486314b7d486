//! Heterogeneous object modeling kernel.
//!
//! An object is a set of closed cells, each bound to a material region that
//! maps any point to a composition vector over a fixed material space. On
//! top of point evaluation the crate renders colored boundary meshes and
//! cuts material-carrying slices for layered fabrication.

pub mod demo;
pub mod error;
pub mod geometry;
pub mod gradient;
pub mod material;
pub mod numfmt;
pub mod slicer;
pub mod visualization;

pub use error::{Error, Result};
