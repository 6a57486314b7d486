use std::collections::{BTreeSet, HashMap};

use nalgebra::Point3;

use super::mesh::{edge_key, EdgeKey, TriangleMesh, MIN_TRIANGLE_AREA};
use crate::error::{Error, Result};

/// Splits every triangle into four at its edge midpoints, `levels` times.
///
/// Input vertices keep their indices; midpoints are appended. Geometry is not
/// smoothed, so every new vertex lies on an input facet. A flagged feature
/// edge `(a, b)` becomes the two flagged halves `(a, m)` and `(m, b)`.
pub fn subdivide_mesh(mesh: &TriangleMesh, levels: u32) -> Result<TriangleMesh> {
    if levels == 0 {
        return Err(Error::Domain {
            what: "subdivision levels",
            value: 0.0,
            domain: ">= 1",
        });
    }
    for t in 0..mesh.triangle_count() {
        let area = mesh.triangle_area(t);
        if !(area > MIN_TRIANGLE_AREA) {
            return Err(Error::DegenerateTriangle { index: t, area });
        }
    }
    let mut vertices = mesh.vertices().to_vec();
    let mut triangles = mesh.triangles().to_vec();
    let mut features = mesh.feature_edges().clone();
    for _ in 0..levels {
        (triangles, features) = split_level(&mut vertices, &triangles, &features);
    }
    Ok(TriangleMesh::from_parts_unchecked(vertices, triangles, features))
}

fn split_level(
    vertices: &mut Vec<Point3<f64>>,
    triangles: &[[usize; 3]],
    features: &BTreeSet<EdgeKey>,
) -> (Vec<[usize; 3]>, BTreeSet<EdgeKey>) {
    let mut midpoints: HashMap<EdgeKey, usize> = HashMap::with_capacity(triangles.len() * 3 / 2);
    let mut next = Vec::with_capacity(triangles.len() * 4);
    for &[a, b, c] in triangles {
        let mut mid = |u: usize, v: usize| {
            *midpoints.entry(edge_key(u, v)).or_insert_with(|| {
                vertices.push(nalgebra::center(&vertices[u], &vertices[v]));
                vertices.len() - 1
            })
        };
        let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
        next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
    }
    let mut next_features = BTreeSet::new();
    for &(a, b) in features {
        match midpoints.get(&(a, b)) {
            Some(&m) => {
                next_features.insert(edge_key(a, m));
                next_features.insert(edge_key(m, b));
            }
            None => {
                next_features.insert((a, b));
            }
        }
    }
    (next, next_features)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::primitives;
    use nalgebra::Vector3;

    fn single_triangle() -> TriangleMesh {
        TriangleMesh::new(
            vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)],
            vec![[0, 1, 2]],
            [(0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn one_triangle_one_level() {
        let out = subdivide_mesh(&single_triangle(), 1).unwrap();
        assert_eq!(out.triangle_count(), 4);
        assert_eq!(out.vertex_count(), 6);
        assert_eq!(out.feature_edges().len(), 2);
        assert!((out.surface_area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn icosahedron_two_levels_stays_watertight() {
        let ico = primitives::icosahedron(1.0);
        let out = subdivide_mesh(&ico, 2).unwrap();
        assert_eq!(out.triangle_count(), 320);
        // Edge-count oracle: a closed triangle mesh has E = 3F/2, each used twice.
        let usage = out.edge_usage();
        assert_eq!(usage.len(), 320 * 3 / 2);
        assert!(usage.values().all(|&n| n == 2));
        assert_eq!(&out.vertices()[..12], ico.vertices());
    }

    #[test]
    fn midpoints_lie_on_input_facets() {
        let ico = primitives::icosahedron(2.0);
        let out = subdivide_mesh(&ico, 1).unwrap();
        // Every child triangle's vertices lie on the plane of its parent.
        for (t, &[a, b, c]) in ico.triangles().iter().enumerate() {
            let n = ico.triangle_normal(t).normalize();
            let base = ico.vertices()[a];
            for child in &out.triangles()[4 * t..4 * t + 4] {
                for &v in child {
                    let dev = (out.vertices()[v] - base).dot(&n);
                    assert!(dev.abs() < 1e-15, "triangle {t} ({a},{b},{c}) deviation {dev}");
                }
            }
        }
    }

    #[test]
    fn box_features_follow_edges() {
        let cube = primitives::box_mesh(Point3::origin(), Point3::new(1.0, 1.0, 1.0));
        let out = subdivide_mesh(&cube, 2).unwrap();
        assert_eq!(out.feature_edges().len(), 12 * 4);
        for &(a, b) in out.feature_edges() {
            // Both ends on a cube edge: at least two coordinates are 0 or 1.
            for v in [a, b] {
                let p = out.vertices()[v];
                let on_face = [p.x, p.y, p.z].iter().filter(|c| **c == 0.0 || **c == 1.0).count();
                assert!(on_face >= 2);
            }
            let d = out.vertices()[a] - out.vertices()[b];
            assert!((d.norm() - 0.25).abs() < 1e-15);
            assert!(d.cross(&Vector3::x()).norm() < 1e-15
                || d.cross(&Vector3::y()).norm() < 1e-15
                || d.cross(&Vector3::z()).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_levels_rejected() {
        assert!(subdivide_mesh(&single_triangle(), 0).is_err());
    }
}
