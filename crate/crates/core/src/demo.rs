//! Small reference objects used by tests, benchmarks and the CLI examples.

use nalgebra::{Point2, Point3, Vector3};

use crate::error::Result;
use crate::geometry::{primitives, Plane, Polyline, TriangleMesh};
use crate::gradient::{
    Cell, GradientReference, GradientRegion, HeterogeneousObject, HybridPatch, HybridRegion, OffsetContour,
    OffsetDirection, OffsetRegion, Region,
};
use crate::material::{CompositionFunction, CompositionVector, Material, MaterialSpace};

pub const RED: [u8; 3] = [255, 0, 0];
pub const BLUE: [u8; 3] = [0, 0, 255];
pub const GREEN: [u8; 3] = [0, 200, 0];

pub fn steel() -> Material {
    Material::new("steel")
        .with_property("E", 200e9, "Pa")
        .with_property("density", 7850.0, "kg/m^3")
        .with_color(RED)
}

pub fn aluminium() -> Material {
    Material::new("aluminium")
        .with_property("E", 70e9, "Pa")
        .with_property("density", 2700.0, "kg/m^3")
        .with_color(BLUE)
}

pub fn zirconia() -> Material {
    Material::new("zirconia")
        .with_property("E", 210e9, "Pa")
        .with_property("density", 6050.0, "kg/m^3")
        .with_color(GREEN)
}

/// Steel (red) and aluminium (blue).
pub fn two_material_space() -> MaterialSpace {
    MaterialSpace::new(vec![steel(), aluminium()]).expect("demo materials are consistent")
}

fn cv(v: &[f64]) -> CompositionVector {
    CompositionVector::new(v.to_vec()).expect("demo compositions sum to one")
}

fn single_cell(space: MaterialSpace, id: &str, mesh: TriangleMesh, region: Region) -> Result<HeterogeneousObject> {
    HeterogeneousObject::new(space, vec![Cell::new(id, mesh)], vec![(id.to_string(), region)])
}

/// Linear grading along z between the planes `z0` and `z1`: pure steel at
/// `z0`, pure aluminium at `z1`.
pub fn z_graded(mesh: TriangleMesh, z0: f64, z1: f64) -> Result<HeterogeneousObject> {
    let region = GradientRegion::new(
        GradientReference::LinearPlane(Plane::horizontal(z0)),
        GradientReference::LinearPlane(Plane::horizontal(z1)),
        cv(&[0.0, 1.0]),
        cv(&[1.0, 0.0]),
        CompositionFunction::linear(),
    )?;
    single_cell(two_material_space(), "slab", mesh, Region::Gradient(region))
}

/// 20 × 20 × 10 mm slab graded linearly from steel at z=0 to aluminium
/// at z=10.
pub fn linear_slab() -> Result<HeterogeneousObject> {
    let mesh = primitives::box_mesh(Point3::origin(), Point3::new(20.0, 20.0, 10.0));
    z_graded(mesh, 0.0, 10.0)
}

/// 10 mm cube of a single material.
pub fn homogeneous_cube() -> Result<HeterogeneousObject> {
    let mesh = primitives::box_mesh(Point3::origin(), Point3::new(10.0, 10.0, 10.0));
    let steel_only = cv(&[1.0, 0.0]);
    let region = GradientRegion::new(
        GradientReference::LinearPlane(Plane::horizontal(0.0)),
        GradientReference::LinearPlane(Plane::horizontal(10.0)),
        steel_only.clone(),
        steel_only,
        CompositionFunction::linear(),
    )?;
    single_cell(two_material_space(), "cube", mesh, Region::Gradient(region))
}

pub const DISK_SEGMENTS: usize = 128;

/// Disk of radius 10 mm and height 2 mm with three concentric offset
/// contours: steel on the rim, a half mix at r=6 and aluminium at r=2.
pub fn offset_disk() -> Result<HeterogeneousObject> {
    let mesh = primitives::cylinder(0.0, 0.0, 10.0, 0.0, 2.0, DISK_SEGMENTS);
    let ring = |r: f64, v: &[f64]| -> Result<OffsetContour> {
        Ok(OffsetContour {
            line: Polyline::circle(Point3::new(0.0, 0.0, 1.0), Vector3::z(), r, DISK_SEGMENTS)?,
            composition: cv(v),
        })
    };
    let region = OffsetRegion::new(
        vec![ring(10.0, &[1.0, 0.0])?, ring(6.0, &[0.5, 0.5])?, ring(2.0, &[0.0, 1.0])?],
        OffsetDirection::Inwards,
        vec![4, 2],
    )?;
    single_cell(two_material_space(), "disk", mesh, Region::Offset(region))
}

/// Right-triangle wedge (legs 20 mm, height 5 mm) whose three sides carry
/// different materials: steel on the x=0 face, aluminium on the y=0 face
/// and zirconia along an axis running under the hypotenuse.
pub fn hybrid_wedge() -> Result<HeterogeneousObject> {
    let outline = [Point2::new(0.0, 0.0), Point2::new(20.0, 0.0), Point2::new(0.0, 20.0)];
    let mesh = primitives::extrude_convex(&outline, 0.0, 5.0);
    let space = MaterialSpace::new(vec![steel(), aluminium(), zirconia()])?;
    let region = HybridRegion::new(vec![
        HybridPatch::new(
            GradientReference::LinearPlane(Plane::new(Point3::origin(), Vector3::x())?),
            cv(&[1.0, 0.0, 0.0]),
        ),
        HybridPatch::new(
            GradientReference::LinearPlane(Plane::new(Point3::origin(), Vector3::y())?),
            cv(&[0.0, 1.0, 0.0]),
        ),
        HybridPatch::new(
            GradientReference::LinearAxis {
                from: Point3::new(20.0, 0.0, 2.5),
                to: Point3::new(0.0, 20.0, 2.5),
            },
            cv(&[0.0, 0.0, 1.0]),
        ),
    ])?;
    single_cell(space, "wedge", mesh, Region::Hybrid(region))
}

/// Sphere of radius 10 mm with exactly 10 000 triangles, graded along z.
pub fn graded_sphere() -> Result<HeterogeneousObject> {
    let mesh = primitives::uv_sphere(Point3::origin(), 10.0, 51, 100);
    z_graded(mesh, -10.0, 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_objects_build() {
        for obj in [linear_slab(), homogeneous_cube(), offset_disk(), hybrid_wedge(), graded_sphere()] {
            obj.unwrap();
        }
        assert_eq!(graded_sphere().unwrap().cells()[0].geometry.triangle_count(), 10_000);
    }

    #[test]
    fn slab_orientation() {
        let slab = linear_slab().unwrap();
        assert!(slab.evaluate_point(&Point3::new(5.0, 5.0, 1e-3)).unwrap().fractions()[0] > 0.99);
        assert_eq!(slab.evaluate_point(&Point3::new(5.0, 5.0, 5.0)).unwrap().fractions(), &[0.5, 0.5]);
    }
}
