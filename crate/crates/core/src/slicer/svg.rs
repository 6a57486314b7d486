use std::fmt::Write as _;
use std::path::Path;

use super::stack::Slice;
use crate::error::{Error, Result};
use crate::numfmt::sig;

/// Margin added on each side of the slice bounding box, as a fraction of
/// its extent.
pub const SVG_MARGIN: f64 = 0.05;

const SVG_DIGITS: usize = 9;

/// One `<polygon>` per triangle, flat-filled with the centroid color.
/// User units are millimetres; y is flipped so the drawing reads like a
/// top view.
pub fn slice_svg_string(slice: &Slice) -> String {
    let n = |x: f64| sig(x, SVG_DIGITS);
    let (lo, hi) = slice
        .bounding_box()
        .unwrap_or((nalgebra::Point2::origin(), nalgebra::Point2::new(1.0, 1.0)));
    let (mx, my) = (SVG_MARGIN * (hi.x - lo.x), SVG_MARGIN * (hi.y - lo.y));
    let (x0, y0) = (lo.x - mx, -(hi.y + my));
    let (w, h) = (hi.x - lo.x + 2.0 * mx, hi.y - lo.y + 2.0 * my);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}mm\" height=\"{}mm\" viewBox=\"{} {} {} {}\">",
        n(w),
        n(h),
        n(x0),
        n(y0),
        n(w),
        n(h)
    );
    let _ = writeln!(out, "<title>layer {} z={}</title>", slice.index, n(slice.z));
    for (t, c) in slice.mesh2d.triangles.iter().zip(&slice.triangle_colors) {
        let pts: Vec<String> = t
            .iter()
            .map(|&i| {
                let p = slice.mesh2d.points[i];
                format!("{},{}", n(p.x), n(-p.y))
            })
            .collect();
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"#{:02x}{:02x}{:02x}\"/>",
            pts.join(" "),
            c[0],
            c[1],
            c[2]
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn export_slice_svg(slice: &Slice, path: &Path) -> Result<usize> {
    let text = slice_svg_string(slice);
    std::fs::write(path, &text).map_err(|e| Error::io(path, e))?;
    Ok(text.len())
}
