use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("triangle {index} is degenerate (area {area:e} mm^2)")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("triangle {triangle} references vertex {vertex}, but the mesh has {count} vertices")]
    VertexIndex {
        triangle: usize,
        vertex: usize,
        count: usize,
    },

    #[error("feature edge ({0}, {1}) is not an edge of the mesh")]
    FeatureEdge(usize, usize),

    #[error("mesh is not watertight: edge ({a}, {b}) is used by {count} triangle(s)")]
    NotWatertight { a: usize, b: usize, count: usize },

    #[error("invalid plane: {0}")]
    InvalidPlane(String),

    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("invalid contour {index}: {reason}")]
    InvalidContour { index: usize, reason: String },

    #[error("contour chain is open: dangling endpoint at ({:.9}, {:.9}, {:.9})", .point[0], .point[1], .point[2])]
    OpenChain { point: [f64; 3] },

    #[error("contour {a} intersects contour {b}")]
    ContourIntersection { a: usize, b: usize },

    #[error("improper contour nesting: {0}")]
    ImproperNesting(String),

    #[error("degenerate gradient region: {0}")]
    DegenerateRegion(String),

    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("shape mismatch: expected {expected} components, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("invalid material space: {0}")]
    InvalidMaterialSpace(String),

    #[error("invalid composition function: {0}")]
    InvalidFunction(String),

    #[error("invalid region for cell `{cell}`: {reason}")]
    InvalidRegion { cell: String, reason: String },

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("point outside object")]
    OutsideObject { point: [f64; 3] },

    #[error("point lies in both cell `{0}` and cell `{1}`")]
    AmbiguousCell(String, String),

    #[error("unknown cell `{0}`")]
    UnknownCell(String),

    #[error("{what} index {index} out of range {range}")]
    OutOfBounds {
        what: &'static str,
        index: usize,
        range: String,
    },

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("layer {layer}: {source}")]
    Layer {
        layer: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
