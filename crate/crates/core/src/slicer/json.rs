use std::path::Path;

use nalgebra::{Point2, Point3};
use serde::{Deserialize, Serialize};

use super::stack::{Slice, SliceStack};
use crate::error::{Error, Result};
use crate::geometry::{Contour2D, Mesh2D};
use crate::material::CompositionVector;
use crate::numfmt::round_decimals;

/// Decimal places kept for every float in the stack file.
pub const JSON_DECIMALS: i32 = 9;

/// Rounding can move a composition sum by up to `k * 5e-10`.
const PARSED_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Serialize, Deserialize)]
struct StackDoc {
    layer_thickness: f64,
    origin: f64,
    material_names: Vec<String>,
    cell_ids: Vec<String>,
    slices: Vec<SliceDoc>,
}

#[derive(Serialize, Deserialize)]
struct SliceDoc {
    index: usize,
    z: f64,
    contours: Vec<Vec<[f64; 2]>>,
    triangles: Vec<[usize; 3]>,
    node_positions: Vec<[f64; 3]>,
    node_cells: Vec<usize>,
    node_compositions: Vec<Vec<f64>>,
    node_colors: Vec<[u8; 3]>,
    triangle_colors: Vec<[u8; 3]>,
}

fn r(x: f64) -> f64 {
    round_decimals(x, JSON_DECIMALS)
}

impl From<&Slice> for SliceDoc {
    fn from(s: &Slice) -> Self {
        SliceDoc {
            index: s.index,
            z: r(s.z),
            contours: s
                .contours
                .iter()
                .map(|c| c.points().iter().map(|p| [r(p.x), r(p.y)]).collect())
                .collect(),
            triangles: s.mesh2d.triangles.clone(),
            node_positions: s.node_positions.iter().map(|p| [r(p.x), r(p.y), r(p.z)]).collect(),
            node_cells: s.node_cells.clone(),
            node_compositions: s
                .node_compositions
                .iter()
                .map(|v| v.fractions().iter().map(|&x| r(x)).collect())
                .collect(),
            node_colors: s.node_colors.clone(),
            triangle_colors: s.triangle_colors.clone(),
        }
    }
}

/// Stack file contents: pretty-printed JSON with floats rounded to
/// [`JSON_DECIMALS`] places.
pub fn slice_json_string(stack: &SliceStack) -> String {
    let doc = StackDoc {
        layer_thickness: stack.layer_thickness,
        origin: r(stack.origin),
        material_names: stack.material_names.clone(),
        cell_ids: stack.cell_ids.clone(),
        slices: stack.slices.iter().map(SliceDoc::from).collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("stack document serializes");
    text.push('\n');
    text
}

pub fn export_slice_json(stack: &SliceStack, path: &Path) -> Result<usize> {
    let text = slice_json_string(stack);
    std::fs::write(path, &text).map_err(|e| Error::io(path, e))?;
    Ok(text.len())
}

pub fn parse_slice_json(text: &str) -> Result<SliceStack> {
    let doc: StackDoc = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let k = doc.material_names.len();
    let slices = doc
        .slices
        .into_iter()
        .map(|s| slice_from_doc(s, k, doc.cell_ids.len()))
        .collect::<Result<_>>()?;
    Ok(SliceStack {
        layer_thickness: doc.layer_thickness,
        origin: doc.origin,
        material_names: doc.material_names,
        cell_ids: doc.cell_ids,
        slices,
    })
}

pub fn read_slice_json(path: &Path) -> Result<SliceStack> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_slice_json(&text)
}

fn slice_from_doc(s: SliceDoc, k: usize, cells: usize) -> Result<Slice> {
    let bad = |msg: String| Error::Consistency(format!("slice {}: {msg}", s.index));
    let n = s.node_positions.len();
    if s.node_cells.len() != n || s.node_compositions.len() != n || s.node_colors.len() != n {
        return Err(bad(format!("per-node arrays disagree with {n} node positions")));
    }
    if s.triangle_colors.len() != s.triangles.len() {
        return Err(bad("one color per triangle expected".into()));
    }
    if let Some(t) = s.triangles.iter().find(|t| t.iter().any(|&i| i >= n)) {
        return Err(bad(format!("triangle {t:?} indexes past {n} nodes")));
    }
    if let Some(c) = s.node_cells.iter().find(|&&c| c >= cells) {
        return Err(bad(format!("node cell {c} out of range")));
    }
    let node_compositions = s
        .node_compositions
        .into_iter()
        .map(|v| {
            let sum: f64 = v.iter().sum();
            if v.len() != k || (sum - 1.0).abs() > PARSED_SUM_TOLERANCE {
                return Err(Error::Consistency(format!(
                    "slice {}: node composition {v:?} is not a {k}-material composition",
                    s.index
                )));
            }
            Ok(CompositionVector::from_raw(v))
        })
        .collect::<Result<_>>()?;
    Ok(Slice {
        index: s.index,
        z: s.z,
        contours: s
            .contours
            .into_iter()
            .map(|c| Contour2D::from_points_unchecked(c.into_iter().map(|[x, y]| Point2::new(x, y)).collect()))
            .collect(),
        mesh2d: Mesh2D {
            points: s.node_positions.iter().map(|p| Point2::new(p[0], p[1])).collect(),
            triangles: s.triangles,
        },
        node_positions: s.node_positions.into_iter().map(Point3::from).collect(),
        node_cells: s.node_cells,
        node_compositions,
        node_colors: s.node_colors,
        triangle_colors: s.triangle_colors,
    })
}

/// Largest scalar difference between two stacks of identical structure,
/// or `None` when counts, indices, topology or colors differ.
pub fn max_stack_deviation(a: &SliceStack, b: &SliceStack) -> Option<f64> {
    if a.material_names != b.material_names || a.cell_ids != b.cell_ids || a.slices.len() != b.slices.len() {
        return None;
    }
    let mut dev = (a.layer_thickness - b.layer_thickness).abs().max((a.origin - b.origin).abs());
    for (s, t) in a.slices.iter().zip(&b.slices) {
        let same_shape = s.index == t.index
            && s.mesh2d.triangles == t.mesh2d.triangles
            && s.node_cells == t.node_cells
            && s.node_colors == t.node_colors
            && s.triangle_colors == t.triangle_colors
            && s.node_positions.len() == t.node_positions.len()
            && s.contours.len() == t.contours.len()
            && s.contours.iter().zip(&t.contours).all(|(c, d)| c.len() == d.len());
        if !same_shape {
            return None;
        }
        dev = dev.max((s.z - t.z).abs());
        for (c, d) in s.contours.iter().zip(&t.contours) {
            for (p, q) in c.points().iter().zip(d.points()) {
                dev = dev.max((p - q).amax());
            }
        }
        for (p, q) in s.node_positions.iter().zip(&t.node_positions) {
            dev = dev.max((p - q).amax());
        }
        for (v, w) in s.node_compositions.iter().zip(&t.node_compositions) {
            if v.len() != w.len() {
                return None;
            }
            dev = dev.max(v.max_abs_diff(w));
        }
    }
    Some(dev)
}
