//! ASCII STL and ASCII PLY readers, plus an ASCII STL writer.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Point3;

use super::mesh::TriangleMesh;
use crate::error::{Error, Result};
use crate::numfmt;

/// Mesh plus optional per-vertex colors, as read from a PLY file.
#[derive(Debug, Clone)]
pub struct PlyMesh {
    pub mesh: TriangleMesh,
    pub colors: Option<Vec<[u8; 3]>>,
}

pub fn read_mesh_file(path: &Path) -> Result<TriangleMesh> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("ply") => parse_ply(&text).map(|p| p.mesh),
        Some("stl") => parse_ascii_stl(&text),
        _ if text.trim_start().starts_with("ply") => parse_ply(&text).map(|p| p.mesh),
        _ => parse_ascii_stl(&text),
    }
}

/// Parses ASCII STL, welding vertices with bit-identical coordinates.
pub fn parse_ascii_stl(text: &str) -> Result<TriangleMesh> {
    let mut vertices: Vec<Point3<f64>> = Vec::new();
    let mut index: HashMap<[u64; 3], usize> = HashMap::new();
    let mut triangles = Vec::new();
    let mut corner: Vec<usize> = Vec::with_capacity(3);
    let mut saw_solid = false;
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            None => {}
            Some("solid") => saw_solid = true,
            Some("vertex") => {
                let coords: Vec<f64> = tokens
                    .map(|t| t.parse::<f64>().map_err(|e| Error::parse(line_no, format!("bad coordinate `{t}`: {e}"))))
                    .collect::<Result<_>>()?;
                if coords.len() != 3 {
                    return Err(Error::parse(line_no, "vertex needs 3 coordinates"));
                }
                if corner.len() == 3 {
                    return Err(Error::parse(line_no, "facet loop has more than 3 vertices"));
                }
                let key = [coords[0].to_bits(), coords[1].to_bits(), coords[2].to_bits()];
                let id = *index.entry(key).or_insert_with(|| {
                    vertices.push(Point3::new(coords[0], coords[1], coords[2]));
                    vertices.len() - 1
                });
                corner.push(id);
            }
            Some("endloop") => {
                if corner.len() != 3 {
                    return Err(Error::parse(line_no, format!("facet loop has {} vertices", corner.len())));
                }
                triangles.push([corner[0], corner[1], corner[2]]);
                corner.clear();
            }
            Some("facet" | "outer" | "endfacet" | "endsolid") => {}
            Some(other) => return Err(Error::parse(line_no, format!("unexpected token `{other}`"))),
        }
    }
    if !saw_solid {
        return Err(Error::parse(1, "missing `solid` header (binary STL is not supported)"));
    }
    TriangleMesh::new(vertices, triangles, [])
}

pub fn write_ascii_stl(mesh: &TriangleMesh, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "solid {name}");
    for t in 0..mesh.triangle_count() {
        let n = mesh.triangle_normal(t).normalize();
        let _ = writeln!(
            out,
            "  facet normal {} {} {}",
            numfmt::sig(n.x, 9),
            numfmt::sig(n.y, 9),
            numfmt::sig(n.z, 9)
        );
        out.push_str("    outer loop\n");
        for p in mesh.triangle_points(t) {
            let _ = writeln!(out, "      vertex {:e} {:e} {:e}", p.x, p.y, p.z);
        }
        out.push_str("    endloop\n  endfacet\n");
    }
    let _ = writeln!(out, "endsolid {name}");
    out
}

struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

struct Property {
    name: String,
    list: bool,
}

/// Parses ASCII PLY with a `vertex` element (x, y, z and optional
/// red/green/blue) and an optional `face` element of index lists.
/// Polygons are fan-triangulated.
pub fn parse_ply(text: &str) -> Result<PlyMesh> {
    let mut lines = text.lines().enumerate().map(|(n, l)| (n + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim() == "ply" => {}
        _ => return Err(Error::parse(1, "missing `ply` magic")),
    }
    let mut elements: Vec<Element> = Vec::new();
    let mut header_done = false;
    for (line_no, line) in lines.by_ref() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["format", "ascii", _] => {}
            ["format", ..] => return Err(Error::parse(line_no, "only `format ascii` is supported")),
            ["comment", ..] | ["obj_info", ..] => {}
            ["element", name, count] => elements.push(Element {
                name: name.to_string(),
                count: count
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad element count `{count}`")))?,
                properties: Vec::new(),
            }),
            ["property", "list", _, _, name] | ["property", _, name] => {
                let list = tokens[1] == "list";
                elements
                    .last_mut()
                    .ok_or_else(|| Error::parse(line_no, "property before any element"))?
                    .properties
                    .push(Property { name: name.to_string(), list });
            }
            ["end_header"] => {
                header_done = true;
                break;
            }
            _ => return Err(Error::parse(line_no, format!("unrecognized header line `{line}`"))),
        }
    }
    if !header_done {
        return Err(Error::parse(1, "missing `end_header`"));
    }

    let mut vertices = Vec::new();
    let mut colors: Option<Vec<[u8; 3]>> = None;
    let mut triangles = Vec::new();
    let mut data = lines.filter(|(_, l)| !l.trim().is_empty());
    for element in &elements {
        let find = |name: &str| element.properties.iter().position(|p| p.name == name && !p.list);
        for _ in 0..element.count {
            let (line_no, line) = data
                .next()
                .ok_or_else(|| Error::parse(0, format!("unexpected end of data in element `{}`", element.name)))?;
            let values: Vec<&str> = line.split_whitespace().collect();
            match element.name.as_str() {
                "vertex" => {
                    let (x, y, z) = match (find("x"), find("y"), find("z")) {
                        (Some(x), Some(y), Some(z)) => (x, y, z),
                        _ => return Err(Error::parse(line_no, "vertex element lacks x, y, z")),
                    };
                    if values.len() < element.properties.len() {
                        return Err(Error::parse(line_no, "too few vertex values"));
                    }
                    let num = |i: usize| {
                        values[i]
                            .parse::<f64>()
                            .map_err(|e| Error::parse(line_no, format!("bad number `{}`: {e}", values[i])))
                    };
                    vertices.push(Point3::new(num(x)?, num(y)?, num(z)?));
                    if let (Some(r), Some(g), Some(b)) = (find("red"), find("green"), find("blue")) {
                        let byte = |i: usize| {
                            values[i]
                                .parse::<u8>()
                                .map_err(|e| Error::parse(line_no, format!("bad color `{}`: {e}", values[i])))
                        };
                        colors.get_or_insert_with(Vec::new).push([byte(r)?, byte(g)?, byte(b)?]);
                    }
                }
                "face" => {
                    let count: usize = values
                        .first()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| Error::parse(line_no, "face line must start with a vertex count"))?;
                    if values.len() < count + 1 || count < 3 {
                        return Err(Error::parse(line_no, "malformed face index list"));
                    }
                    let idx: Vec<usize> = values[1..=count]
                        .iter()
                        .map(|v| v.parse().map_err(|_| Error::parse(line_no, format!("bad index `{v}`"))))
                        .collect::<Result<_>>()?;
                    for k in 1..count - 1 {
                        triangles.push([idx[0], idx[k], idx[k + 1]]);
                    }
                }
                _ => {}
            }
        }
    }
    let mesh = TriangleMesh::new(vertices, triangles, [])?;
    Ok(PlyMesh { mesh, colors })
}
