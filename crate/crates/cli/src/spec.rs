//! TOML model specification.
//!
//! ```toml
//! units = "mm"
//!
//! [[materials]]
//! name = "steel"
//! color = [255, 0, 0]
//! properties = { E = { value = 200e9, unit = "Pa" } }
//!
//! [[cells]]
//! id = "slab"
//! mesh = "slab.stl"            # relative to this file
//!
//! [[regions]]
//! cell = "slab"
//! type = "gradient"
//! start = { type = "plane", origin = [0, 0, 0], normal = [0, 0, 1] }
//! end = { type = "plane", origin = [0, 0, 10], normal = [0, 0, 1] }
//! mcs = [0, 1]
//! mcf = [1, 0]
//! function = { kind = "linear", margin = 0.0 }
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fgm_core::geometry::io::read_mesh_file;
use fgm_core::geometry::{Plane, Polyline};
use fgm_core::gradient::{
    Cell, GradientReference, GradientRegion, HeterogeneousObject, HybridPatch, HybridRegion, OffsetContour,
    OffsetDirection, OffsetRegion, Region,
};
use fgm_core::material::{CompositionFunction, CompositionVector, FunctionKind, Material, MaterialSpace};
use nalgebra::{Point3, Vector3};
use serde::Deserialize;

use crate::error::CliError;

/// Dihedral angle above which imported mesh edges count as sharp.
pub const DEFAULT_SHARP_ANGLE: f64 = 30.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub units: String,
    pub materials: Vec<MaterialSpec>,
    pub cells: Vec<CellSpec>,
    pub regions: Vec<RegionSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub name: String,
    pub color: Option<[u8; 3]>,
    #[serde(default)]
    pub properties: BTreeMap<String, PropertySpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertySpec {
    pub value: f64,
    pub unit: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub id: String,
    pub mesh: PathBuf,
    #[serde(default)]
    pub sub_volumes: Vec<String>,
    pub sharp_angle: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ReferenceSpec {
    Point { at: [f64; 3] },
    Axis { from: [f64; 3], to: [f64; 3] },
    Polyline {
        points: Vec<[f64; 3]>,
        #[serde(default)]
        closed: bool,
    },
    Plane { origin: [f64; 3], normal: [f64; 3] },
    Surface { mesh: PathBuf },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub kind: String,
    #[serde(default)]
    pub margin: f64,
    pub exponent: Option<f64>,
    pub rate: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub center: [f64; 3],
    #[serde(default = "z_axis")]
    pub normal: [f64; 3],
    pub radius: f64,
    #[serde(default = "default_segments")]
    pub segments: usize,
}

fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

fn default_segments() -> usize {
    64
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSpec {
    pub composition: Vec<f64>,
    pub points: Option<Vec<[f64; 3]>>,
    pub circle: Option<CircleSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchSpec {
    pub reference: ReferenceSpec,
    pub composition: Vec<f64>,
    #[serde(default = "unit_weight")]
    pub weight: f64,
}

fn unit_weight() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegionSpec {
    Gradient {
        cell: String,
        start: ReferenceSpec,
        end: ReferenceSpec,
        mcs: Vec<f64>,
        mcf: Vec<f64>,
        #[serde(default)]
        function: Option<FunctionSpec>,
    },
    Offset {
        cell: String,
        direction: String,
        subdivisions: Vec<usize>,
        contours: Vec<ContourSpec>,
    },
    Hybrid { cell: String, patches: Vec<PatchSpec> },
}

impl RegionSpec {
    pub fn cell(&self) -> &str {
        match self {
            RegionSpec::Gradient { cell, .. } | RegionSpec::Offset { cell, .. } | RegionSpec::Hybrid { cell, .. } => {
                cell
            }
        }
    }
}

/// Line and column (1-based) of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

pub fn parse_model_spec(text: &str) -> Result<ModelSpec, CliError> {
    toml::from_str(text).map_err(|e| {
        let at = e.span().map(|s| line_col(text, s.start));
        let message = e.message().trim().to_string();
        match at {
            Some((line, col)) => CliError::Invalid(format!("parse error at line {line}, column {col}: {message}")),
            None => CliError::Invalid(format!("parse error: {message}")),
        }
    })
}

/// Reads, parses and fully validates a model spec.
pub fn load_model_spec(path: &Path) -> Result<HeterogeneousObject, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let spec = parse_model_spec(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    build_object(&spec, base)
}

fn p3(a: [f64; 3]) -> Point3<f64> {
    Point3::from(a)
}

fn invalid(element: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{element}: {e}"))
}

fn read_mesh(base: &Path, rel: &Path, element: &str) -> Result<fgm_core::geometry::TriangleMesh, CliError> {
    let path = base.join(rel);
    read_mesh_file(&path).map_err(|e| match e {
        fgm_core::Error::Io { .. } => CliError::Io(format!("{element}: mesh file {e}")),
        other => invalid(format_args!("{element}: mesh {}", path.display()), other),
    })
}

fn build_reference(spec: &ReferenceSpec, base: &Path, element: &str) -> Result<GradientReference, CliError> {
    let reference = match spec {
        ReferenceSpec::Point { at } => GradientReference::Point(p3(*at)),
        ReferenceSpec::Axis { from, to } => GradientReference::LinearAxis { from: p3(*from), to: p3(*to) },
        ReferenceSpec::Polyline { points, closed } => GradientReference::FlexibleAxis(
            Polyline::new(points.iter().copied().map(p3).collect(), *closed).map_err(|e| invalid(element, e))?,
        ),
        ReferenceSpec::Plane { origin, normal } => GradientReference::LinearPlane(
            Plane::new(p3(*origin), Vector3::from(*normal)).map_err(|e| invalid(element, e))?,
        ),
        ReferenceSpec::Surface { mesh } => GradientReference::FlexibleSurface(Arc::new(read_mesh(base, mesh, element)?)),
    };
    reference.validate().map_err(|e| invalid(element, e))?;
    Ok(reference)
}

fn composition(v: &[f64], k: usize, element: &str) -> Result<CompositionVector, CliError> {
    let c = CompositionVector::new(v.to_vec()).map_err(|e| invalid(element, e))?;
    c.expect_len(k).map_err(|e| invalid(element, e))?;
    Ok(c)
}

fn build_function(spec: Option<&FunctionSpec>, element: &str) -> Result<CompositionFunction, CliError> {
    let Some(spec) = spec else {
        return Ok(CompositionFunction::linear());
    };
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| invalid(element, format!("function kind `{}` needs `{name}`", spec.kind)))
    };
    let kind = match spec.kind.to_ascii_lowercase().as_str() {
        "linear" => FunctionKind::Linear,
        "power" => FunctionKind::Power { exponent: need(spec.exponent, "exponent")? },
        "logarithmic" => FunctionKind::Logarithmic,
        "exponential" => FunctionKind::Exponential { rate: need(spec.rate, "rate")? },
        "parabolic" => FunctionKind::Parabolic,
        other => {
            return Err(invalid(
                element,
                format!("unknown function kind `{other}` (linear, power, logarithmic, exponential, parabolic)"),
            ))
        }
    };
    CompositionFunction::new(kind, spec.margin).map_err(|e| invalid(element, e))
}

fn build_region(spec: &RegionSpec, k: usize, base: &Path, element: &str) -> Result<Region, CliError> {
    let at = |field: &str| format!("{element}.{field}");
    let region = match spec {
        RegionSpec::Gradient { start, end, mcs, mcf, function, .. } => Region::Gradient(
            GradientRegion::new(
                build_reference(start, base, &at("start"))?,
                build_reference(end, base, &at("end"))?,
                composition(mcs, k, &at("mcs"))?,
                composition(mcf, k, &at("mcf"))?,
                build_function(function.as_ref(), &at("function"))?,
            )
            .map_err(|e| invalid(element, e))?,
        ),
        RegionSpec::Offset { direction, subdivisions, contours, .. } => {
            let direction = match direction.to_ascii_lowercase().as_str() {
                "inwards" => OffsetDirection::Inwards,
                "outwards" => OffsetDirection::Outwards,
                other => return Err(invalid(at("direction"), format!("`{other}` is not inwards or outwards"))),
            };
            let contours = contours
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let here = at(&format!("contours[{i}]"));
                    let line = match (&c.points, &c.circle) {
                        (Some(points), None) => Polyline::new(points.iter().copied().map(p3).collect(), true),
                        (None, Some(circle)) => Polyline::circle(
                            p3(circle.center),
                            Vector3::from(circle.normal),
                            circle.radius,
                            circle.segments,
                        ),
                        _ => return Err(invalid(&here, "give exactly one of `points` or `circle`")),
                    }
                    .map_err(|e| invalid(&here, e))?;
                    Ok(OffsetContour { line, composition: composition(&c.composition, k, &format!("{here}.composition"))? })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Region::Offset(
                OffsetRegion::new(contours, direction, subdivisions.clone()).map_err(|e| invalid(element, e))?,
            )
        }
        RegionSpec::Hybrid { patches, .. } => {
            let patches = patches
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    let here = at(&format!("patches[{j}]"));
                    Ok(HybridPatch::new(
                        build_reference(&p.reference, base, &format!("{here}.reference"))?,
                        composition(&p.composition, k, &format!("{here}.composition"))?,
                    )
                    .with_weight(p.weight))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Region::Hybrid(HybridRegion::new(patches).map_err(|e| invalid(element, e))?)
        }
    };
    Ok(region)
}

/// Builds the object described by `spec`, resolving files against `base`.
pub fn build_object(spec: &ModelSpec, base: &Path) -> Result<HeterogeneousObject, CliError> {
    if spec.units != "mm" {
        return Err(invalid("units", format!("`{}` is not supported (only \"mm\")", spec.units)));
    }
    let materials = spec
        .materials
        .iter()
        .map(|m| {
            let mut material = Material::new(&m.name);
            for (name, p) in &m.properties {
                material = material.with_property(name, p.value, &p.unit);
            }
            if let Some(c) = m.color {
                material = material.with_color(c);
            }
            material
        })
        .collect();
    let space = MaterialSpace::new(materials).map_err(|e| invalid("materials", e))?;

    let cells = spec
        .cells
        .iter()
        .map(|c| {
            let element = format!("cell `{}`", c.id);
            let angle = c.sharp_angle.unwrap_or(DEFAULT_SHARP_ANGLE);
            let mesh = read_mesh(base, &c.mesh, &element)?.with_sharp_edges(angle);
            Ok(Cell::new(&c.id, mesh).with_sub_volumes(c.sub_volumes.iter().cloned()))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut bound: BTreeMap<&str, usize> = BTreeMap::new();
    let mut bindings = Vec::with_capacity(spec.regions.len());
    for (i, r) in spec.regions.iter().enumerate() {
        let element = format!("regions[{i}] (cell `{}`)", r.cell());
        if let Some(first) = bound.insert(r.cell(), i) {
            return Err(invalid(
                element,
                format!("ambiguous: regions[{first}] is already bound to this cell; each cell takes exactly one region"),
            ));
        }
        if !spec.cells.iter().any(|c| c.id == r.cell()) {
            return Err(invalid(element, "no cell with this id"));
        }
        bindings.push((r.cell().to_string(), build_region(r, space.k(), base, &element)?));
    }
    if let Some(c) = spec.cells.iter().find(|c| !bound.contains_key(c.id.as_str())) {
        return Err(invalid(format!("cell `{}`", c.id), "no region is bound to this cell"));
    }
    HeterogeneousObject::new(space, cells, bindings).map_err(|e| invalid("object", e))
}
