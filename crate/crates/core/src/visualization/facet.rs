use std::collections::{BTreeSet, HashMap};

use nalgebra::Point3;
use rayon::prelude::*;

use super::color::{map_color, ColorMap};
use crate::error::{Error, Result};
use crate::geometry::{edge_key, subdivide_mesh, EdgeKey, TriangleMesh};
use crate::gradient::HeterogeneousObject;
use crate::material::CompositionVector;

/// Maximum number of adaptive splits applied to one base triangle.
pub const MAX_SPLIT_DEPTH: u32 = 6;

/// Boundary mesh with one color and one composition per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredMesh {
    pub mesh: TriangleMesh,
    pub vertex_colors: Vec<[u8; 3]>,
    pub vertex_compositions: Vec<CompositionVector>,
}

impl ColoredMesh {
    pub fn empty() -> Self {
        ColoredMesh {
            mesh: TriangleMesh::empty(),
            vertex_colors: Vec::new(),
            vertex_compositions: Vec::new(),
        }
    }

    /// Largest per-triangle composition span (max-norm over components).
    pub fn max_triangle_span(&self) -> f64 {
        self.mesh
            .triangles()
            .iter()
            .map(|t| composition_span(t.map(|i| &self.vertex_compositions[i])))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct FacetOptions {
    pub base_levels: u32,
    pub gradient_threshold: f64,
    pub colormap: ColorMap,
    /// Evaluate each vertex once; disabling only costs time.
    pub memoize: bool,
}

impl FacetOptions {
    pub fn new(base_levels: u32, gradient_threshold: f64, colormap: ColorMap) -> Self {
        FacetOptions {
            base_levels,
            gradient_threshold,
            colormap,
            memoize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacetResult {
    pub mesh: ColoredMesh,
    /// Triangles split because their span exceeded the threshold.
    pub adaptive_splits: usize,
    /// Triangles left above threshold because the depth cap was reached.
    pub depth_cap_hits: usize,
    /// Region evaluations performed.
    pub evaluations: usize,
}

fn composition_span(v: [&CompositionVector; 3]) -> f64 {
    (0..v[0].len())
        .map(|c| {
            let (a, b, d) = (v[0][c], v[1][c], v[2][c]);
            a.max(b).max(d) - a.min(b).min(d)
        })
        .fold(0.0, f64::max)
}

/// Facets every cell boundary, refining where the material varies faster
/// than `gradient_threshold`, and colors the vertices.
pub fn facet_boundary(obj: &HeterogeneousObject, opts: &FacetOptions) -> Result<FacetResult> {
    if !(opts.gradient_threshold > 0.0 && opts.gradient_threshold.is_finite()) {
        return Err(Error::Domain {
            what: "gradient threshold",
            value: opts.gradient_threshold,
            domain: "(0, inf)",
        });
    }
    if opts.colormap.anchors.len() != obj.space().k() {
        return Err(Error::Shape {
            expected: obj.space().k(),
            actual: opts.colormap.anchors.len(),
        });
    }
    let parts: Vec<CellFacets> = (0..obj.cells().len())
        .into_par_iter()
        .map(|cell| facet_cell(obj, cell, opts))
        .collect::<Result<_>>()?;

    let mut out = FacetResult {
        mesh: ColoredMesh::empty(),
        adaptive_splits: 0,
        depth_cap_hits: 0,
        evaluations: 0,
    };
    for part in parts {
        out.mesh.mesh.append(&part.mesh);
        out.mesh.vertex_compositions.extend(part.compositions);
        out.adaptive_splits += part.splits;
        out.depth_cap_hits += part.cap_hits;
        out.evaluations += part.evaluations;
    }
    out.mesh.vertex_colors = out
        .mesh
        .vertex_compositions
        .iter()
        .map(|v| map_color(v, &opts.colormap))
        .collect::<Result<_>>()?;
    Ok(out)
}

struct CellFacets {
    mesh: TriangleMesh,
    compositions: Vec<CompositionVector>,
    splits: usize,
    cap_hits: usize,
    evaluations: usize,
}

struct Refiner<'a> {
    obj: &'a HeterogeneousObject,
    cell: usize,
    threshold: f64,
    memoize: bool,
    vertices: Vec<Point3<f64>>,
    memo: Vec<Option<CompositionVector>>,
    midpoints: HashMap<EdgeKey, usize>,
    features: BTreeSet<EdgeKey>,
    triangles: Vec<[usize; 3]>,
    splits: usize,
    cap_hits: usize,
    evaluations: usize,
}

impl Refiner<'_> {
    fn composition(&mut self, v: usize) -> Result<CompositionVector> {
        if let Some(hit) = &self.memo[v] {
            return Ok(hit.clone());
        }
        self.evaluations += 1;
        let value = self.obj.evaluate_in_cell(self.cell, &self.vertices[v])?;
        if self.memoize {
            self.memo[v] = Some(value.clone());
        }
        Ok(value)
    }

    fn midpoint(&mut self, a: usize, b: usize) -> usize {
        let key = edge_key(a, b);
        if let Some(&m) = self.midpoints.get(&key) {
            return m;
        }
        let m = self.vertices.len();
        self.vertices.push(nalgebra::center(&self.vertices[a], &self.vertices[b]));
        self.memo.push(None);
        self.midpoints.insert(key, m);
        if self.features.contains(&key) {
            self.features.insert(edge_key(a, m));
            self.features.insert(edge_key(m, b));
        }
        m
    }

    fn refine(&mut self, t: [usize; 3], depth: u32) -> Result<()> {
        let comps = [self.composition(t[0])?, self.composition(t[1])?, self.composition(t[2])?];
        if composition_span([&comps[0], &comps[1], &comps[2]]) <= self.threshold {
            self.triangles.push(t);
            return Ok(());
        }
        if depth >= MAX_SPLIT_DEPTH {
            self.cap_hits += 1;
            self.triangles.push(t);
            return Ok(());
        }
        self.splits += 1;
        let [a, b, c] = t;
        let (ab, bc, ca) = (self.midpoint(a, b), self.midpoint(b, c), self.midpoint(c, a));
        for child in [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]] {
            self.refine(child, depth + 1)?;
        }
        Ok(())
    }
}

fn facet_cell(obj: &HeterogeneousObject, cell: usize, opts: &FacetOptions) -> Result<CellFacets> {
    let geometry = &obj.cells()[cell].geometry;
    let base = if opts.base_levels == 0 {
        (**geometry).clone()
    } else {
        subdivide_mesh(geometry, opts.base_levels)?
    };
    let mut r = Refiner {
        obj,
        cell,
        threshold: opts.gradient_threshold,
        memoize: opts.memoize,
        vertices: base.vertices().to_vec(),
        memo: vec![None; base.vertex_count()],
        midpoints: HashMap::new(),
        features: base.feature_edges().clone(),
        triangles: Vec::with_capacity(base.triangle_count()),
        splits: 0,
        cap_hits: 0,
        evaluations: 0,
    };
    for &t in base.triangles() {
        r.refine(t, 0)?;
    }
    // T-junctions leave some split parents as edges of unsplit neighbours.
    let live: BTreeSet<EdgeKey> = r
        .triangles
        .iter()
        .flat_map(|t| [edge_key(t[0], t[1]), edge_key(t[1], t[2]), edge_key(t[2], t[0])])
        .collect();
    let features = r.features.intersection(&live).copied().collect();
    let compositions = (0..r.vertices.len())
        .map(|v| r.composition(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(CellFacets {
        mesh: TriangleMesh::from_parts_unchecked(r.vertices, r.triangles, features),
        compositions,
        splits: r.splits,
        cap_hits: r.cap_hits,
        evaluations: r.evaluations,
    })
}
