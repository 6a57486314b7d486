use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Point3;

use super::facet::ColoredMesh;
use crate::error::{Error, Result};
use crate::geometry::io::parse_ply;
use crate::geometry::TriangleMesh;
use crate::numfmt::sig;

/// Significant digits written for PLY coordinates.
pub const PLY_DIGITS: usize = 9;

/// ASCII PLY text with per-vertex colors.
pub fn colored_ply_string(cm: &ColoredMesh) -> String {
    let mesh = &cm.mesh;
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "element vertex {}", mesh.vertex_count());
    for axis in ["x", "y", "z"] {
        let _ = writeln!(out, "property double {axis}");
    }
    for channel in ["red", "green", "blue"] {
        let _ = writeln!(out, "property uchar {channel}");
    }
    let _ = writeln!(out, "element face {}", mesh.triangle_count());
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for (p, c) in mesh.vertices().iter().zip(&cm.vertex_colors) {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            sig(p.x, PLY_DIGITS),
            sig(p.y, PLY_DIGITS),
            sig(p.z, PLY_DIGITS),
            c[0],
            c[1],
            c[2]
        );
    }
    for t in mesh.triangles() {
        let _ = writeln!(out, "3 {} {} {}", t[0], t[1], t[2]);
    }
    out
}

/// Writes `cm` as ASCII PLY and returns the number of bytes written.
pub fn export_colored_mesh(cm: &ColoredMesh, path: &Path) -> Result<usize> {
    let text = colored_ply_string(cm);
    std::fs::write(path, &text).map_err(|e| Error::io(path, e))?;
    Ok(text.len())
}

/// Reads back a colored PLY; vertices without colors come back white.
pub fn import_colored_mesh(path: &Path) -> Result<(TriangleMesh, Vec<[u8; 3]>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let ply = parse_ply(&text)?;
    let colors = ply
        .colors
        .unwrap_or_else(|| vec![[255, 255, 255]; ply.mesh.vertex_count()]);
    Ok((ply.mesh, colors))
}

/// Largest coordinate deviation between matching vertices of two meshes.
pub fn max_vertex_deviation(a: &TriangleMesh, b: &TriangleMesh) -> Option<f64> {
    (a.vertex_count() == b.vertex_count()).then(|| {
        a.vertices()
            .iter()
            .zip(b.vertices())
            .map(|(p, q): (&Point3<f64>, _)| (p - q).amax())
            .fold(0.0, f64::max)
    })
}
