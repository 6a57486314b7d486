use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use nalgebra::{Point3, Vector3};

use super::hybrid::HybridRegion;
use super::offset::OffsetRegion;
use super::region::GradientRegion;
use crate::error::{Error, Result};
use crate::geometry::distance::point_mesh_distance;
use crate::geometry::TriangleMesh;
use crate::material::{CompositionVector, MaterialSpace};

/// Cache entries are dropped wholesale beyond this size.
const CACHE_CAPACITY: usize = 1 << 20;

/// A closed region of the object, optionally split into child sub-volumes.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: String,
    pub geometry: Arc<TriangleMesh>,
    pub sub_volumes: Vec<String>,
}

impl Cell {
    pub fn new(id: impl Into<String>, geometry: TriangleMesh) -> Self {
        Cell {
            id: id.into(),
            geometry: Arc::new(geometry),
            sub_volumes: Vec::new(),
        }
    }

    pub fn with_sub_volumes(mut self, ids: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.sub_volumes = ids.into_iter().map(Into::into).collect();
        self
    }
}

/// Material distribution bound to one cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Gradient(GradientRegion),
    Offset(OffsetRegion),
    Hybrid(HybridRegion),
}

impl Region {
    pub fn kind(&self) -> &'static str {
        match self {
            Region::Gradient(_) => "gradient",
            Region::Offset(_) => "offset",
            Region::Hybrid(_) => "hybrid",
        }
    }

    pub fn evaluate(&self, p: &Point3<f64>) -> Result<CompositionVector> {
        match self {
            Region::Gradient(r) => r.evaluate(p),
            Region::Offset(r) => r.evaluate(p),
            Region::Hybrid(r) => r.evaluate(p),
        }
    }

    fn compositions(&self) -> Vec<&CompositionVector> {
        match self {
            Region::Gradient(r) => vec![r.mcs(), r.mcf()],
            Region::Offset(r) => r.contours().iter().map(|c| &c.composition).collect(),
            Region::Hybrid(r) => r.patches().iter().map(|p| &p.composition).collect(),
        }
    }
}

type CacheKey = (usize, [u64; 3]);

/// Memo of per-point evaluations keyed on the exact coordinates.
#[derive(Debug, Default)]
struct EvalCache {
    entries: RwLock<HashMap<CacheKey, CompositionVector>>,
}

impl EvalCache {
    fn get(&self, key: &CacheKey) -> Option<CompositionVector> {
        self.entries.read().ok()?.get(key).cloned()
    }

    fn put(&self, key: CacheKey, value: CompositionVector) {
        if let Ok(mut map) = self.entries.write() {
            if map.len() >= CACHE_CAPACITY {
                map.clear();
            }
            map.insert(key, value);
        }
    }

    fn len(&self) -> usize {
        self.entries.read().map(|m| m.len()).unwrap_or(0)
    }
}

/// Geometry plus material information: cells, one region per cell, and the
/// material space the compositions refer to.
#[derive(Debug)]
pub struct HeterogeneousObject {
    space: MaterialSpace,
    cells: Vec<Cell>,
    regions: Vec<Region>,
    parents: Vec<Option<usize>>,
    bounds: Vec<(Point3<f64>, Point3<f64>)>,
    cache: Option<EvalCache>,
}

impl Clone for HeterogeneousObject {
    fn clone(&self) -> Self {
        HeterogeneousObject {
            space: self.space.clone(),
            cells: self.cells.clone(),
            regions: self.regions.clone(),
            parents: self.parents.clone(),
            bounds: self.bounds.clone(),
            cache: self.cache.as_ref().map(|_| EvalCache::default()),
        }
    }
}

impl HeterogeneousObject {
    /// Validates and assembles an object. `bindings` must name every cell
    /// exactly once. Evaluation caching starts enabled.
    pub fn new(space: MaterialSpace, cells: Vec<Cell>, bindings: Vec<(String, Region)>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidObject("object has no cells".into()));
        }
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, cell) in cells.iter().enumerate() {
            if cell.id.trim().is_empty() {
                return Err(Error::InvalidObject(format!("cell {i} has an empty id")));
            }
            if index.insert(cell.id.as_str(), i).is_some() {
                return Err(Error::InvalidObject(format!("duplicate cell id `{}`", cell.id)));
            }
            let in_cell = |e: Error| Error::InvalidRegion {
                cell: cell.id.clone(),
                reason: e.to_string(),
            };
            cell.geometry.validate().map_err(in_cell)?;
            cell.geometry.check_watertight().map_err(in_cell)?;
        }

        let mut slots: Vec<Option<Region>> = vec![None; cells.len()];
        for (cell_id, region) in bindings {
            let i = *index
                .get(cell_id.as_str())
                .ok_or_else(|| Error::UnknownCell(cell_id.clone()))?;
            if slots[i].is_some() {
                return Err(Error::InvalidRegion {
                    cell: cell_id,
                    reason: "ambiguous: more than one region is bound to this cell".into(),
                });
            }
            for comp in region.compositions() {
                comp.expect_len(space.k()).map_err(|e| Error::InvalidRegion {
                    cell: cell_id.clone(),
                    reason: e.to_string(),
                })?;
            }
            slots[i] = Some(region);
        }
        let regions = slots
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| Error::InvalidRegion {
                    cell: cells[i].id.clone(),
                    reason: "no region is bound to this cell".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut parents = vec![None; cells.len()];
        for (i, cell) in cells.iter().enumerate() {
            for child in &cell.sub_volumes {
                let c = *index.get(child.as_str()).ok_or_else(|| Error::UnknownCell(child.clone()))?;
                if c == i {
                    return Err(Error::InvalidObject(format!("cell `{child}` lists itself as a sub-volume")));
                }
                if parents[c].replace(i).is_some() {
                    return Err(Error::InvalidObject(format!("cell `{child}` is a sub-volume of two cells")));
                }
            }
        }
        for start in 0..cells.len() {
            let mut cur = parents[start];
            let mut steps = 0;
            while let Some(p) = cur {
                steps += 1;
                if p == start || steps > cells.len() {
                    return Err(Error::InvalidObject(format!(
                        "sub-volume cycle through cell `{}`",
                        cells[start].id
                    )));
                }
                cur = parents[p];
            }
        }
        for (c, parent) in parents.iter().enumerate() {
            if let Some(p) = *parent {
                let outer = &cells[p].geometry;
                for v in cells[c].geometry.vertices() {
                    if !point_in_mesh(outer, v) && point_mesh_distance(v, outer) > 1e-9 {
                        return Err(Error::InvalidObject(format!(
                            "sub-volume `{}` is not nested within `{}`",
                            cells[c].id, cells[p].id
                        )));
                    }
                }
            }
        }

        let bounds = cells
            .iter()
            .map(|c| c.geometry.bounding_box().expect("validated non-empty"))
            .collect();
        Ok(HeterogeneousObject {
            space,
            cells,
            regions,
            parents,
            bounds,
            cache: Some(EvalCache::default()),
        })
    }

    pub fn with_cache(mut self, enabled: bool) -> Self {
        self.cache = enabled.then(EvalCache::default);
        self
    }

    pub fn cache_enabled(&self) -> bool {
        self.cache.is_some()
    }

    pub fn cached_entries(&self) -> usize {
        self.cache.as_ref().map_or(0, EvalCache::len)
    }

    pub fn space(&self) -> &MaterialSpace {
        &self.space
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn region(&self, cell: usize) -> &Region {
        &self.regions[cell]
    }

    pub fn parent(&self, cell: usize) -> Option<usize> {
        self.parents[cell]
    }

    pub fn cell_index(&self, id: &str) -> Result<usize> {
        self.cells
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::UnknownCell(id.to_string()))
    }

    pub fn bounding_box(&self) -> (Point3<f64>, Point3<f64>) {
        self.bounds
            .iter()
            .skip(1)
            .fold(self.bounds[0], |(lo, hi), (a, b)| (lo.inf(a), hi.sup(b)))
    }

    /// Index of the innermost cell containing `p`.
    pub fn locate(&self, p: &Point3<f64>) -> Result<usize> {
        let mut hits: Vec<usize> = (0..self.cells.len())
            .filter(|&i| {
                let (lo, hi) = self.bounds[i];
                p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z
            })
            .filter(|&i| point_in_mesh(&self.cells[i].geometry, p))
            .collect();
        // A sub-volume takes precedence over the cells that contain it.
        let ancestors: Vec<usize> = hits
            .iter()
            .flat_map(|&i| std::iter::successors(self.parents[i], |&a| self.parents[a]))
            .collect();
        hits.retain(|i| !ancestors.contains(i));
        match hits.as_slice() {
            [] => Err(Error::OutsideObject { point: [p.x, p.y, p.z] }),
            [only] => Ok(*only),
            [a, b, ..] => Err(Error::AmbiguousCell(self.cells[*a].id.clone(), self.cells[*b].id.clone())),
        }
    }

    /// Material composition at `p`.
    pub fn evaluate_point(&self, p: &Point3<f64>) -> Result<CompositionVector> {
        let cell = self.locate(p)?;
        self.evaluate_in_cell(cell, p)
    }

    /// Composition at `p` using the region of `cell` directly, without a
    /// containment test. Used for points on cell boundaries.
    pub fn evaluate_in_cell(&self, cell: usize, p: &Point3<f64>) -> Result<CompositionVector> {
        let region = self.regions.get(cell).ok_or_else(|| Error::OutOfBounds {
            what: "cell",
            index: cell,
            range: format!("[0, {})", self.cells.len()),
        })?;
        let Some(cache) = &self.cache else {
            return region.evaluate(p);
        };
        let key = (cell, [p.x.to_bits(), p.y.to_bits(), p.z.to_bits()]);
        if let Some(hit) = cache.get(&key) {
            return Ok(hit);
        }
        let value = region.evaluate(p)?;
        cache.put(key, value.clone());
        Ok(value)
    }
}

const RAY_DIRECTIONS: [[f64; 3]; 3] = [
    [0.5773502691896258, 0.4472135954999579, 0.6832923210210099],
    [-0.3090169943749474, 0.8090169943749475, 0.5],
    [0.7071067811865476, -0.5, -0.5],
];

/// Ray-parity containment test against a closed mesh. Rays that graze an
/// edge or vertex are retried along another direction.
pub fn point_in_mesh(mesh: &TriangleMesh, p: &Point3<f64>) -> bool {
    let mut last = false;
    for dir in RAY_DIRECTIONS {
        match ray_parity(mesh, p, &Vector3::from(dir).normalize()) {
            Some(inside) => return inside,
            None => last = !last,
        }
    }
    last
}

fn ray_parity(mesh: &TriangleMesh, p: &Point3<f64>, dir: &Vector3<f64>) -> Option<bool> {
    const GRAZE: f64 = 1e-12;
    let v = mesh.vertices();
    let mut crossings = 0usize;
    for &[a, b, c] in mesh.triangles() {
        let (a, b, c) = (v[a], v[b], v[c]);
        let e1 = b - a;
        let e2 = c - a;
        let h = dir.cross(&e2);
        let det = e1.dot(&h);
        let scale = e1.norm() * e2.norm();
        if det.abs() <= GRAZE * scale {
            // Ray parallel to the facet plane: only matters if it lies in it.
            let n = e1.cross(&e2);
            if (p - a).dot(&n).abs() <= GRAZE * scale {
                return None;
            }
            continue;
        }
        let inv = 1.0 / det;
        let s = p - a;
        let u = s.dot(&h) * inv;
        let q = s.cross(&e1);
        let w = dir.dot(&q) * inv;
        let t = e2.dot(&q) * inv;
        if t <= 0.0 || u < -GRAZE || w < -GRAZE || u + w > 1.0 + GRAZE {
            continue;
        }
        if u <= GRAZE || w <= GRAZE || u + w >= 1.0 - GRAZE {
            return None;
        }
        crossings += 1;
    }
    Some(crossings % 2 == 1)
}
