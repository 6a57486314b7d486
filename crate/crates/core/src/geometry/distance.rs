//! Unsigned distance queries against gradient reference entities.

use nalgebra::Point3;

use super::mesh::TriangleMesh;
use super::shapes::Polyline;
use crate::error::{Error, Result};
use crate::gradient::GradientReference;

/// `d0 + d1` below this is treated as coincident references.
pub const DEGENERATE_DISTANCE_SUM: f64 = 1e-12;

pub fn point_segment_distance(p: &Point3<f64>, a: &Point3<f64>, b: &Point3<f64>) -> f64 {
    (p - closest_on_segment(p, a, b)).norm()
}

pub fn closest_on_segment(p: &Point3<f64>, a: &Point3<f64>, b: &Point3<f64>) -> Point3<f64> {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return *a;
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

/// Closest point on triangle `abc` (Voronoi-region walk).
pub fn closest_on_triangle(p: &Point3<f64>, a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>) -> Point3<f64> {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

pub fn point_polyline_distance(p: &Point3<f64>, line: &Polyline) -> f64 {
    line.segments()
        .map(|(a, b)| point_segment_distance(p, &a, &b))
        .fold(f64::INFINITY, f64::min)
}

/// Distance to the closest point of any triangle of `mesh`.
pub fn point_mesh_distance(p: &Point3<f64>, mesh: &TriangleMesh) -> f64 {
    let v = mesh.vertices();
    mesh.triangles()
        .iter()
        .map(|&[a, b, c]| (p - closest_on_triangle(p, &v[a], &v[b], &v[c])).norm_squared())
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Euclidean distance from `p` to the reference entity.
pub fn distance_to_reference(p: &Point3<f64>, reference: &GradientReference) -> f64 {
    match reference {
        GradientReference::Point(q) => (p - q).norm(),
        GradientReference::LinearAxis { from, to } => point_segment_distance(p, from, to),
        GradientReference::FlexibleAxis(line) => point_polyline_distance(p, line),
        GradientReference::LinearPlane(plane) => plane.signed_distance(p).abs(),
        GradientReference::FlexibleSurface(mesh) => point_mesh_distance(p, mesh),
    }
}

/// Bi-distance coordinate `d0 / (d0 + d1)` clamped to `[0, 1]`.
pub fn normalized_gradient_coordinate(
    p: &Point3<f64>,
    start: &GradientReference,
    end: &GradientReference,
) -> Result<f64> {
    let d0 = distance_to_reference(p, start);
    let d1 = distance_to_reference(p, end);
    let sum = d0 + d1;
    if !(sum >= DEGENERATE_DISTANCE_SUM) {
        return Err(Error::DegenerateRegion(format!(
            "start and end references coincide at ({}, {}, {})",
            p.x, p.y, p.z
        )));
    }
    Ok((d0 / sum).clamp(0.0, 1.0))
}
