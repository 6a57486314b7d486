use nalgebra::{Point2, Point3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{section, triangulate_region, Contour2D, Mesh2D, Plane};
use crate::gradient::HeterogeneousObject;
use crate::material::CompositionVector;
use crate::visualization::{map_color, ColorMap};

/// Tolerance used when counting layers against the object height, mm.
const LAYER_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SliceOptions {
    pub thickness: f64,
    pub max_edge: f64,
    pub colormap: ColorMap,
    /// Height of the bottom of layer 0; defaults to the object's lowest z.
    pub origin: Option<f64>,
}

impl SliceOptions {
    pub fn new(thickness: f64, max_edge: f64, colormap: ColorMap) -> Self {
        SliceOptions {
            thickness,
            max_edge,
            colormap,
            origin: None,
        }
    }
}

/// One layer: the section outline, its triangulation and the material
/// sampled at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub index: usize,
    pub z: f64,
    /// Outline loops as triangulated: outer loops counter-clockwise, holes
    /// (including the footprint of nested sub-volumes) clockwise.
    pub contours: Vec<Contour2D>,
    pub mesh2d: Mesh2D,
    pub node_positions: Vec<Point3<f64>>,
    /// Cell whose region was sampled at each node.
    pub node_cells: Vec<usize>,
    pub node_compositions: Vec<CompositionVector>,
    pub node_colors: Vec<[u8; 3]>,
    /// Flat color of each triangle, from the composition at its centroid.
    pub triangle_colors: Vec<[u8; 3]>,
}

impl Slice {
    pub fn triangle_centroid(&self, t: usize) -> Point3<f64> {
        let c = self.mesh2d.centroid(t);
        Point3::new(c.x, c.y, self.z)
    }

    pub fn contour_area(&self) -> f64 {
        self.contours.iter().map(Contour2D::signed_area).sum()
    }

    pub fn bounding_box(&self) -> Option<(Point2<f64>, Point2<f64>)> {
        let mut pts = self.contours.iter().flat_map(|c| c.points()).chain(&self.mesh2d.points);
        let first = *pts.next()?;
        Some(pts.fold((first, first), |(lo, hi), p| (lo.inf(p), hi.sup(p))))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceStack {
    pub layer_thickness: f64,
    /// Bottom of layer 0; layer `i` is sampled at `origin + (i + 0.5) t`.
    pub origin: f64,
    pub material_names: Vec<String>,
    pub cell_ids: Vec<String>,
    pub slices: Vec<Slice>,
}

/// Cuts `obj` into layers of uniform thickness, sampled at mid-layer.
///
/// Layers whose plane misses the object are omitted; the others keep their
/// index. Layers are cut in parallel and returned in index order.
pub fn generate_slices(obj: &HeterogeneousObject, opts: &SliceOptions) -> Result<SliceStack> {
    let t = opts.thickness;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain { what: "layer thickness", value: t, domain: "(0, inf)" });
    }
    if !(opts.max_edge > 0.0 && opts.max_edge.is_finite()) {
        return Err(Error::Domain { what: "max edge", value: opts.max_edge, domain: "(0, inf)" });
    }
    if opts.colormap.anchors.len() != obj.space().k() {
        return Err(Error::Shape { expected: obj.space().k(), actual: opts.colormap.anchors.len() });
    }
    let (lo, hi) = obj.bounding_box();
    let origin = opts.origin.unwrap_or(lo.z);
    let first = ((lo.z - origin) / t + LAYER_EPSILON).floor().max(0.0) as usize;
    let end = ((hi.z - origin) / t - LAYER_EPSILON).ceil().max(0.0) as usize;

    let slices: Vec<Option<Slice>> = (first..end)
        .into_par_iter()
        .map(|i| {
            slice_layer(obj, opts, i, origin + (i as f64 + 0.5) * t)
                .map_err(|e| Error::Layer { layer: i, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;

    Ok(SliceStack {
        layer_thickness: t,
        origin,
        material_names: obj.space().names(),
        cell_ids: obj.cells().iter().map(|c| c.id.clone()).collect(),
        slices: slices.into_iter().flatten().collect(),
    })
}

fn slice_layer(obj: &HeterogeneousObject, opts: &SliceOptions, index: usize, z: f64) -> Result<Option<Slice>> {
    let plane = Plane::horizontal(z);
    let cells = obj.cells();
    let sections: Vec<Vec<Contour2D>> = cells
        .iter()
        .map(|c| section(&c.geometry, &plane).map(|s| s.contours))
        .collect::<Result<_>>()?;

    let mut contours = Vec::new();
    let mut mesh2d = Mesh2D::default();
    let mut node_cells = Vec::new();
    for (cell, own) in sections.iter().enumerate() {
        if own.is_empty() {
            continue;
        }
        // Direct children are cut out of the parent's footprint.
        let mut loops = own.clone();
        for (child, child_loops) in sections.iter().enumerate() {
            if obj.parent(child) == Some(cell) {
                loops.extend(child_loops.iter().map(Contour2D::reversed));
            }
        }
        let part = triangulate_region(&loops, opts.max_edge)?;
        node_cells.extend(std::iter::repeat_n(cell, part.points.len()));
        mesh2d.append(&part);
        contours.extend(loops);
    }
    if mesh2d.triangles.is_empty() {
        return Ok(None);
    }

    let node_positions: Vec<Point3<f64>> = mesh2d.points.iter().map(|q| Point3::new(q.x, q.y, z)).collect();
    let node_compositions = node_positions
        .iter()
        .zip(&node_cells)
        .map(|(p, &cell)| obj.evaluate_in_cell(cell, p))
        .collect::<Result<Vec<_>>>()?;
    let node_colors = node_compositions
        .iter()
        .map(|v| map_color(v, &opts.colormap))
        .collect::<Result<Vec<_>>>()?;
    let triangle_colors = (0..mesh2d.triangles.len())
        .map(|t| {
            let c = mesh2d.centroid(t);
            let v = obj.evaluate_in_cell(node_cells[mesh2d.triangles[t][0]], &Point3::new(c.x, c.y, z))?;
            map_color(&v, &opts.colormap)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Some(Slice {
        index,
        z,
        contours,
        mesh2d,
        node_positions,
        node_cells,
        node_compositions,
        node_colors,
        triangle_colors,
    }))
}
