//! Closed, outward-oriented primitive meshes used by demos, tests and the CLI.

use std::collections::{BTreeSet, HashMap};

use nalgebra::{Point2, Point3, Vector3};

use super::mesh::{edge_key, TriangleMesh};

/// Axis-aligned box with its 12 edges flagged as features.
pub fn box_mesh(min: Point3<f64>, max: Point3<f64>) -> TriangleMesh {
    let corner = |i: usize| {
        Point3::new(
            if i & 1 == 0 { min.x } else { max.x },
            if i & 2 == 0 { min.y } else { max.y },
            if i & 4 == 0 { min.z } else { max.z },
        )
    };
    let vertices = (0..8).map(corner).collect();
    let triangles = vec![
        [0, 2, 3],
        [0, 3, 1],
        [4, 5, 7],
        [4, 7, 6],
        [0, 1, 5],
        [0, 5, 4],
        [2, 6, 7],
        [2, 7, 3],
        [0, 4, 6],
        [0, 6, 2],
        [1, 3, 7],
        [1, 7, 5],
    ];
    TriangleMesh::from_parts_unchecked(vertices, triangles, BTreeSet::new()).with_sharp_edges(30.0)
}

pub fn icosahedron(radius: f64) -> TriangleMesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ];
    let vertices: Vec<_> = raw
        .iter()
        .map(|&(x, y, z)| Point3::from(Vector3::new(x, y, z).normalize() * radius))
        .collect();
    let triangles = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    orient_convex(vertices, triangles)
}

/// Sphere centred at the origin: an icosahedron split `levels` times with the
/// new vertices pushed onto the sphere. Has `20 * 4^levels` triangles.
pub fn icosphere(radius: f64, levels: u32) -> TriangleMesh {
    let base = icosahedron(radius);
    let mut vertices = base.vertices().to_vec();
    let mut triangles = base.triangles().to_vec();
    for _ in 0..levels {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for &[a, b, c] in &triangles {
            let mut mid = |u: usize, v: usize| {
                *midpoints.entry(edge_key(u, v)).or_insert_with(|| {
                    let m = nalgebra::center(&vertices[u], &vertices[v]);
                    vertices.push(Point3::from(m.coords.normalize() * radius));
                    vertices.len() - 1
                })
            };
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        triangles = next;
    }
    TriangleMesh::from_parts_unchecked(vertices, triangles, BTreeSet::new())
}

/// Latitude/longitude sphere centred at `center` with
/// `2 * segments * (rings - 1)` triangles.
pub fn uv_sphere(center: Point3<f64>, radius: f64, rings: usize, segments: usize) -> TriangleMesh {
    assert!(rings >= 2 && segments >= 3);
    let mut vertices = vec![center + Vector3::new(0.0, 0.0, radius)];
    for i in 1..rings {
        let theta = std::f64::consts::PI * i as f64 / rings as f64;
        for j in 0..segments {
            let phi = std::f64::consts::TAU * j as f64 / segments as f64;
            vertices.push(
                center
                    + radius
                        * Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()),
            );
        }
    }
    vertices.push(center - Vector3::new(0.0, 0.0, radius));
    let south = vertices.len() - 1;
    let ring = |i: usize, j: usize| 1 + (i - 1) * segments + j % segments;
    let mut triangles = Vec::new();
    for j in 0..segments {
        triangles.push([0, ring(1, j), ring(1, j + 1)]);
        triangles.push([south, ring(rings - 1, j + 1), ring(rings - 1, j)]);
    }
    for i in 1..rings - 1 {
        for j in 0..segments {
            let (a, b, c, d) = (ring(i, j), ring(i, j + 1), ring(i + 1, j), ring(i + 1, j + 1));
            triangles.push([a, c, d]);
            triangles.push([a, d, b]);
        }
    }
    orient_convex(vertices, triangles)
}

/// Right prism over a convex polygon in the xy plane, spanning `z0..z1`.
pub fn extrude_convex(polygon: &[Point2<f64>], z0: f64, z1: f64) -> TriangleMesh {
    let n = polygon.len();
    assert!(n >= 3 && z1 > z0);
    let mut vertices: Vec<Point3<f64>> = polygon.iter().map(|p| Point3::new(p.x, p.y, z0)).collect();
    vertices.extend(polygon.iter().map(|p| Point3::new(p.x, p.y, z1)));
    let mut triangles = Vec::new();
    for i in 1..n - 1 {
        triangles.push([0, i, i + 1]);
        triangles.push([n, n + i, n + i + 1]);
    }
    for i in 0..n {
        let j = (i + 1) % n;
        triangles.push([i, j, n + j]);
        triangles.push([i, n + j, n + i]);
    }
    orient_convex(vertices, triangles).with_sharp_edges(30.0)
}

/// Closed cylinder around the z axis through `(cx, cy)`.
pub fn cylinder(cx: f64, cy: f64, radius: f64, z0: f64, z1: f64, segments: usize) -> TriangleMesh {
    let ring: Vec<_> = (0..segments)
        .map(|j| {
            let a = std::f64::consts::TAU * j as f64 / segments as f64;
            Point2::new(cx + radius * a.cos(), cy + radius * a.sin())
        })
        .collect();
    extrude_convex(&ring, z0, z1)
}

/// Flips triangles of a convex closed surface so normals face away from the
/// vertex centroid.
fn orient_convex(vertices: Vec<Point3<f64>>, mut triangles: Vec<[usize; 3]>) -> TriangleMesh {
    let centroid = vertices.iter().fold(Vector3::zeros(), |acc, p| acc + p.coords) / vertices.len() as f64;
    for tri in &mut triangles {
        let [a, b, c] = tri.map(|i| vertices[i]);
        let normal = (b - a).cross(&(c - a));
        let face_center = (a.coords + b.coords + c.coords) / 3.0;
        if normal.dot(&(face_center - centroid)) < 0.0 {
            tri.swap(1, 2);
        }
    }
    TriangleMesh::from_parts_unchecked(vertices, triangles, BTreeSet::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitives_are_valid_closed_meshes() {
        let meshes = [
            icosahedron(1.0),
            icosphere(1.0, 2),
            uv_sphere(Point3::new(1.0, 2.0, 3.0), 2.0, 8, 12),
            cylinder(0.0, 0.0, 5.0, 0.0, 2.0, 32),
            extrude_convex(
                &[Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), Point2::new(0.0, 3.0)],
                0.0,
                1.0,
            ),
        ];
        for mesh in &meshes {
            mesh.validate().unwrap();
            mesh.check_watertight().unwrap();
            assert!(mesh.signed_volume() > 0.0);
        }
        assert_eq!(meshes[1].triangle_count(), 320);
        assert_eq!(meshes[2].triangle_count(), 2 * 12 * 7);
    }

    #[test]
    fn wedge_volume() {
        let wedge = extrude_convex(
            &[Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), Point2::new(0.0, 3.0)],
            0.0,
            2.0,
        );
        assert!((wedge.signed_volume() - 12.0).abs() < 1e-12);
        // 3 base + 3 top + 3 vertical
        assert_eq!(wedge.feature_edges().len(), 9);
    }
}
