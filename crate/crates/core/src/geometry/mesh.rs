use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Point3, Vector3};

use crate::error::{Error, Result};

/// Smallest triangle area accepted by [`TriangleMesh::new`], in mm².
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

/// Undirected edge key with the smaller vertex index first.
pub type EdgeKey = (usize, usize);

#[inline]
pub fn edge_key(a: usize, b: usize) -> EdgeKey {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Indexed triangle surface in millimetres.
///
/// Triangles are counter-clockwise when seen from outside, so for a closed
/// mesh the face normals point out of the enclosed volume. Sharp edges are
/// kept as a set of undirected vertex pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleMesh {
    vertices: Vec<Point3<f64>>,
    triangles: Vec<[usize; 3]>,
    feature_edges: BTreeSet<EdgeKey>,
}

impl TriangleMesh {
    pub fn new(
        vertices: Vec<Point3<f64>>,
        triangles: Vec<[usize; 3]>,
        feature_edges: impl IntoIterator<Item = EdgeKey>,
    ) -> Result<Self> {
        let mesh = TriangleMesh {
            vertices,
            triangles,
            feature_edges: feature_edges
                .into_iter()
                .map(|(a, b)| edge_key(a, b))
                .collect(),
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub(crate) fn from_parts_unchecked(
        vertices: Vec<Point3<f64>>,
        triangles: Vec<[usize; 3]>,
        feature_edges: BTreeSet<EdgeKey>,
    ) -> Self {
        TriangleMesh {
            vertices,
            triangles,
            feature_edges,
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Checks index bounds, triangle areas and feature edges.
    pub fn validate(&self) -> Result<()> {
        let count = self.vertices.len();
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                if v >= count {
                    return Err(Error::VertexIndex {
                        triangle: t,
                        vertex: v,
                        count,
                    });
                }
            }
        }
        for p in &self.vertices {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(Error::InvalidObject(format!(
                    "non-finite vertex ({}, {}, {})",
                    p.x, p.y, p.z
                )));
            }
        }
        for t in 0..self.triangles.len() {
            let area = self.triangle_area(t);
            if !(area > MIN_TRIANGLE_AREA) {
                return Err(Error::DegenerateTriangle { index: t, area });
            }
        }
        if !self.feature_edges.is_empty() {
            let edges = self.edge_usage();
            if let Some(&(a, b)) = self.feature_edges.iter().find(|e| !edges.contains_key(e)) {
                return Err(Error::FeatureEdge(a, b));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point3<f64>] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn feature_edges(&self) -> &BTreeSet<EdgeKey> {
        &self.feature_edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle_points(&self, t: usize) -> [Point3<f64>; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Non-normalized face normal (twice the area vector).
    pub fn triangle_normal(&self, t: usize) -> Vector3<f64> {
        let [a, b, c] = self.triangle_points(t);
        (b - a).cross(&(c - a))
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        0.5 * self.triangle_normal(t).norm()
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Signed enclosed volume; positive for outward-oriented closed meshes.
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&[a, b, c]| {
                let (a, b, c) = (self.vertices[a], self.vertices[b], self.vertices[c]);
                a.coords.dot(&b.coords.cross(&c.coords)) / 6.0
            })
            .sum()
    }

    /// Number of triangles using each undirected edge.
    pub fn edge_usage(&self) -> BTreeMap<EdgeKey, usize> {
        let mut usage = BTreeMap::new();
        for &[a, b, c] in &self.triangles {
            for (u, v) in [(a, b), (b, c), (c, a)] {
                *usage.entry(edge_key(u, v)).or_insert(0) += 1;
            }
        }
        usage
    }

    pub fn is_watertight(&self) -> bool {
        self.check_watertight().is_ok()
    }

    /// Every edge must be shared by exactly two triangles.
    pub fn check_watertight(&self) -> Result<()> {
        if self.triangles.is_empty() {
            return Err(Error::InvalidObject("mesh has no triangles".into()));
        }
        match self.edge_usage().into_iter().find(|&(_, n)| n != 2) {
            Some(((a, b), count)) => Err(Error::NotWatertight { a, b, count }),
            None => Ok(()),
        }
    }

    /// Axis-aligned bounds `(min, max)`; `None` for a mesh without vertices.
    pub fn bounding_box(&self) -> Option<(Point3<f64>, Point3<f64>)> {
        let first = *self.vertices.first()?;
        Some(self.vertices.iter().fold((first, first), |(lo, hi), p| {
            (lo.inf(p), hi.sup(p))
        }))
    }

    /// Applies `f` to every vertex, keeping topology and feature flags.
    pub fn map_vertices(&self, f: impl Fn(&Point3<f64>) -> Point3<f64>) -> TriangleMesh {
        TriangleMesh {
            vertices: self.vertices.iter().map(f).collect(),
            triangles: self.triangles.clone(),
            feature_edges: self.feature_edges.clone(),
        }
    }

    pub fn translated(&self, offset: Vector3<f64>) -> TriangleMesh {
        self.map_vertices(|p| p + offset)
    }

    /// Flags every edge whose dihedral angle exceeds `angle_deg` (and every
    /// boundary edge) as a feature edge.
    pub fn with_sharp_edges(mut self, angle_deg: f64) -> TriangleMesh {
        let cos_limit = angle_deg.to_radians().cos();
        let mut faces: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
        for (t, &[a, b, c]) in self.triangles.iter().enumerate() {
            for (u, v) in [(a, b), (b, c), (c, a)] {
                faces.entry(edge_key(u, v)).or_default().push(t);
            }
        }
        for (edge, ts) in faces {
            let sharp = match ts.as_slice() {
                [t0, t1] => {
                    let n0 = self.triangle_normal(*t0).normalize();
                    let n1 = self.triangle_normal(*t1).normalize();
                    n0.dot(&n1) < cos_limit
                }
                _ => true,
            };
            if sharp {
                self.feature_edges.insert(edge);
            }
        }
        self
    }

    /// Appends `other`, offsetting its indices.
    pub fn append(&mut self, other: &TriangleMesh) {
        let offset = self.vertices.len();
        self.vertices.extend_from_slice(&other.vertices);
        self.triangles.extend(
            other
                .triangles
                .iter()
                .map(|t| [t[0] + offset, t[1] + offset, t[2] + offset]),
        );
        self.feature_edges.extend(
            other
                .feature_edges
                .iter()
                .map(|&(a, b)| (a + offset, b + offset)),
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::primitives;

    #[test]
    fn rejects_out_of_range_index() {
        let err = TriangleMesh::new(
            vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0)],
            vec![[0, 1, 2]],
            [],
        )
        .unwrap_err();
        assert!(matches!(err, Error::VertexIndex { vertex: 2, .. }));
    }

    #[test]
    fn rejects_degenerate_triangle() {
        let err = TriangleMesh::new(
            vec![
                Point3::origin(),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(2.0, 0.0, 0.0),
            ],
            vec![[0, 1, 2]],
            [],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateTriangle { index: 0, .. }));
    }

    #[test]
    fn rejects_unknown_feature_edge() {
        let err = TriangleMesh::new(
            vec![
                Point3::origin(),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(5.0, 5.0, 5.0),
            ],
            vec![[0, 1, 2]],
            [(0, 3)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::FeatureEdge(0, 3)));
    }

    #[test]
    fn box_is_closed_and_outward() {
        let cube = primitives::box_mesh(Point3::origin(), Point3::new(1.0, 2.0, 3.0));
        assert!(cube.is_watertight());
        assert!((cube.signed_volume() - 6.0).abs() < 1e-12);
        assert_eq!(cube.feature_edges().len(), 12);
    }

    #[test]
    fn single_triangle_is_not_watertight() {
        let tri = TriangleMesh::new(
            vec![
                Point3::origin(),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
            [],
        )
        .unwrap();
        assert!(matches!(
            tri.check_watertight(),
            Err(Error::NotWatertight { count: 1, .. })
        ));
    }
}
