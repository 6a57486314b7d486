use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use fgm_core::gradient::HeterogeneousObject;
use fgm_core::material::property_report;
use fgm_core::numfmt::sig;
use fgm_core::slicer::{export_slice_json, export_slice_svg, generate_slices, SliceOptions};
use fgm_core::visualization::{export_colored_mesh, facet_boundary, ColorMap, ColorMode, FacetOptions};
use nalgebra::Point3;

use crate::error::CliError;
use crate::spec::load_model_spec;

const DIGITS: usize = 9;

pub fn cmd_validate(path: &Path) -> Result<(), CliError> {
    load_model_spec(path).map(|_| ())
}

fn point(p: &Point3<f64>) -> String {
    format!("[{}, {}, {}]", sig(p.x, DIGITS), sig(p.y, DIGITS), sig(p.z, DIGITS))
}

pub fn cmd_info(obj: &HeterogeneousObject) -> String {
    let space = obj.space();
    let mut out = String::new();
    let _ = writeln!(out, "units: mm");
    let _ = writeln!(out, "materials (k={}): {}", space.k(), space.names().join(", "));
    for name in space.property_names() {
        let unit = space.property_unit(name).unwrap_or("");
        let _ = writeln!(out, "property: {name} [{unit}]");
    }
    let _ = writeln!(out, "cells: {}", obj.cells().len());
    for (i, cell) in obj.cells().iter().enumerate() {
        let parent = obj.parent(i).map(|p| format!(", inside `{}`", obj.cells()[p].id)).unwrap_or_default();
        let _ = writeln!(
            out,
            "  {}: {} region, {} triangles{parent}",
            cell.id,
            obj.region(i).kind(),
            cell.geometry.triangle_count()
        );
    }
    let _ = writeln!(out, "regions: {}", obj.regions().len());
    let (lo, hi) = obj.bounding_box();
    let _ = writeln!(out, "bounding box: {} .. {}", point(&lo), point(&hi));
    out
}

pub fn cmd_query(obj: &HeterogeneousObject, p: &Point3<f64>) -> Result<String, CliError> {
    let cell = obj.locate(p)?;
    let v = obj.evaluate_in_cell(cell, p)?;
    let mut out = String::new();
    let _ = writeln!(out, "cell: {}", obj.cells()[cell].id);
    let _ = writeln!(out, "materials: {}", obj.space().names().join(" "));
    let fractions: Vec<String> = v.fractions().iter().map(|x| sig(*x, DIGITS)).collect();
    let _ = writeln!(out, "composition: {}", fractions.join(" "));
    for (name, value, unit) in property_report(&v, obj.space())? {
        let _ = writeln!(out, "{name}: {} {unit}", sig(value, DIGITS));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct MeshArgs {
    pub out: PathBuf,
    pub subdiv: u32,
    pub threshold: f64,
    pub colormap: ColorMode,
}

pub fn cmd_mesh(obj: &HeterogeneousObject, args: &MeshArgs) -> Result<String, CliError> {
    let opts = FacetOptions::new(args.subdiv, args.threshold, ColorMap::for_space(obj.space(), args.colormap));
    let result = facet_boundary(obj, &opts)?;
    let bytes = export_colored_mesh(&result.mesh, &args.out)?;
    Ok(format!(
        "wrote {} ({bytes} bytes): {} vertices, {} faces, {} adaptive splits, {} depth-cap hits\n",
        args.out.display(),
        result.mesh.mesh.vertex_count(),
        result.mesh.mesh.triangle_count(),
        result.adaptive_splits,
        result.depth_cap_hits
    ))
}

#[derive(Debug, Clone)]
pub struct SliceArgs {
    pub thickness: f64,
    pub max_edge: f64,
    pub out_dir: PathBuf,
    pub svg: bool,
    pub colormap: ColorMode,
}

/// Name of the stack file written into the output directory.
pub const STACK_FILE: &str = "slices.json";

pub fn cmd_slice(obj: &HeterogeneousObject, args: &SliceArgs) -> Result<String, CliError> {
    let opts = SliceOptions::new(args.thickness, args.max_edge, ColorMap::for_space(obj.space(), args.colormap));
    let stack = generate_slices(obj, &opts)?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.out_dir.display())))?;
    let json = args.out_dir.join(STACK_FILE);
    export_slice_json(&stack, &json)?;
    let mut out = format!("wrote {} slices to {}\n", stack.slices.len(), json.display());
    if args.svg {
        for slice in &stack.slices {
            export_slice_svg(slice, &args.out_dir.join(format!("layer_{:04}.svg", slice.index)))?;
        }
        let _ = writeln!(out, "wrote {} SVG layers to {}", stack.slices.len(), args.out_dir.display());
    }
    Ok(out)
}
