use std::sync::Arc;

use nalgebra::{Point3, Similarity3};

use crate::error::{Error, Result};
use crate::geometry::{Plane, Polyline, TriangleMesh};

/// Geometric entity that grading distance is measured from.
#[derive(Debug, Clone, PartialEq)]
pub enum GradientReference {
    Point(Point3<f64>),
    /// Straight axis segment.
    LinearAxis { from: Point3<f64>, to: Point3<f64> },
    /// Swept axis given as a polyline; distance is to the nearest segment.
    FlexibleAxis(Polyline),
    LinearPlane(Plane),
    /// Pre-tessellated freeform reference surface.
    FlexibleSurface(Arc<TriangleMesh>),
}

impl GradientReference {
    pub fn kind(&self) -> &'static str {
        match self {
            GradientReference::Point(_) => "point",
            GradientReference::LinearAxis { .. } => "axis",
            GradientReference::FlexibleAxis(_) => "polyline",
            GradientReference::LinearPlane(_) => "plane",
            GradientReference::FlexibleSurface(_) => "surface",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |p: &Point3<f64>| p.iter().all(|c| c.is_finite());
        match self {
            GradientReference::Point(p) if !finite(p) => {
                Err(Error::DegenerateRegion("point reference is not finite".into()))
            }
            GradientReference::LinearAxis { from, to } => {
                if !finite(from) || !finite(to) {
                    return Err(Error::DegenerateRegion("axis reference is not finite".into()));
                }
                if (to - from).norm() <= crate::geometry::shapes::MIN_POINT_SEPARATION {
                    return Err(Error::DegenerateRegion("axis reference has zero length".into()));
                }
                Ok(())
            }
            GradientReference::FlexibleSurface(mesh) => {
                if mesh.is_empty() {
                    return Err(Error::DegenerateRegion("surface reference has no triangles".into()));
                }
                mesh.validate()
            }
            _ => Ok(()),
        }
    }

    /// The same reference moved by a similarity transform.
    pub fn transformed(&self, t: &Similarity3<f64>) -> GradientReference {
        match self {
            GradientReference::Point(p) => GradientReference::Point(t.transform_point(p)),
            GradientReference::LinearAxis { from, to } => GradientReference::LinearAxis {
                from: t.transform_point(from),
                to: t.transform_point(to),
            },
            GradientReference::FlexibleAxis(line) => {
                GradientReference::FlexibleAxis(line.map_points(|p| t.transform_point(p)))
            }
            GradientReference::LinearPlane(plane) => GradientReference::LinearPlane(
                Plane::new(t.transform_point(&plane.origin()), t.transform_vector(&plane.normal()))
                    .expect("similarity keeps normals non-zero"),
            ),
            GradientReference::FlexibleSurface(mesh) => {
                GradientReference::FlexibleSurface(Arc::new(mesh.map_vertices(|p| t.transform_point(p))))
            }
        }
    }
}
