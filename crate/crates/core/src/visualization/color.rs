use crate::error::{Error, Result};
use crate::material::{CompositionVector, MaterialSpace};

/// Anchors used for materials without an explicit display color.
pub const DEFAULT_PALETTE: [[u8; 3]; 8] = [
    [255, 0, 0],
    [0, 0, 255],
    [0, 200, 0],
    [255, 200, 0],
    [160, 0, 200],
    [0, 200, 200],
    [128, 128, 128],
    [255, 255, 255],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorMode {
    /// Channel-wise convex combination of the anchors.
    Rgb,
    /// Convex combination in hue/lightness/saturation, hue on the shorter arc.
    Hls,
}

impl std::str::FromStr for ColorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rgb" => Ok(ColorMode::Rgb),
            "hls" => Ok(ColorMode::Hls),
            other => Err(Error::InvalidObject(format!("unknown color mode `{other}` (expected rgb or hls)"))),
        }
    }
}

/// One display color per primary material.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorMap {
    pub mode: ColorMode,
    pub anchors: Vec<[u8; 3]>,
}

impl ColorMap {
    pub fn new(mode: ColorMode, anchors: Vec<[u8; 3]>) -> Result<Self> {
        if anchors.is_empty() {
            return Err(Error::InvalidObject("color map needs at least one anchor".into()));
        }
        Ok(ColorMap { mode, anchors })
    }

    /// Anchors from the materials' own colors, falling back to the palette.
    pub fn for_space(space: &MaterialSpace, mode: ColorMode) -> Self {
        let anchors = space
            .materials()
            .iter()
            .enumerate()
            .map(|(i, m)| m.color.unwrap_or(DEFAULT_PALETTE[i % DEFAULT_PALETTE.len()]))
            .collect();
        ColorMap { mode, anchors }
    }

    pub fn map(&self, v: &CompositionVector) -> Result<[u8; 3]> {
        map_color(v, self)
    }
}

fn quantize(x: f64) -> u8 {
    (x + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Display color of a composition (round half up per channel).
pub fn map_color(v: &CompositionVector, cmap: &ColorMap) -> Result<[u8; 3]> {
    v.expect_len(cmap.anchors.len())?;
    let w = v.fractions();
    Ok(match cmap.mode {
        ColorMode::Rgb => {
            let mut acc = [0.0f64; 3];
            for (weight, anchor) in w.iter().zip(&cmap.anchors) {
                for (c, &a) in acc.iter_mut().zip(anchor) {
                    *c += weight * a as f64;
                }
            }
            acc.map(quantize)
        }
        ColorMode::Hls => {
            let hls: Vec<[f64; 3]> = cmap.anchors.iter().map(|c| rgb_to_hls(c.map(|x| x as f64 / 255.0))).collect();
            let lightness: f64 = w.iter().zip(&hls).map(|(wi, c)| wi * c[1]).sum();
            let saturation: f64 = w.iter().zip(&hls).map(|(wi, c)| wi * c[2]).sum();
            let hue = blend_hue(w, &hls);
            hls_to_rgb([hue, lightness, saturation]).map(|x| quantize(x * 255.0))
        }
    })
}

/// Weighted hue of the chromatic anchors, measured as signed shortest-arc
/// offsets from the most heavily weighted one.
fn blend_hue(weights: &[f64], hls: &[[f64; 3]]) -> f64 {
    let chromatic: Vec<(f64, f64)> = weights
        .iter()
        .zip(hls)
        .filter(|(w, c)| **w > 0.0 && c[2] > 0.0)
        .map(|(w, c)| (*w, c[0]))
        .collect();
    let Some(&(_, base)) = chromatic.iter().max_by(|a, b| a.0.total_cmp(&b.0)) else {
        return 0.0;
    };
    let total: f64 = chromatic.iter().map(|(w, _)| w).sum();
    let offset: f64 = chromatic
        .iter()
        .map(|&(w, h)| {
            let mut d = h - base;
            if d > 0.5 {
                d -= 1.0;
            } else if d <= -0.5 {
                d += 1.0;
            }
            w * d
        })
        .sum::<f64>()
        / total;
    (base + offset).rem_euclid(1.0)
}

/// RGB in `[0, 1]` to `[hue, lightness, saturation]`, hue in `[0, 1)`.
pub fn rgb_to_hls([r, g, b]: [f64; 3]) -> [f64; 3] {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let l = (min + max) / 2.0;
    if max == min {
        return [0.0, l, 0.0];
    }
    let delta = max - min;
    let s = if l <= 0.5 { delta / (max + min) } else { delta / (2.0 - max - min) };
    let (rc, gc, bc) = ((max - r) / delta, (max - g) / delta, (max - b) / delta);
    let h = if r == max {
        bc - gc
    } else if g == max {
        2.0 + rc - bc
    } else {
        4.0 + gc - rc
    };
    [(h / 6.0).rem_euclid(1.0), l, s]
}

pub fn hls_to_rgb([h, l, s]: [f64; 3]) -> [f64; 3] {
    if s == 0.0 {
        return [l, l, l];
    }
    let m2 = if l <= 0.5 { l * (1.0 + s) } else { l + s - l * s };
    let m1 = 2.0 * l - m2;
    let channel = |hue: f64| {
        let hue = hue.rem_euclid(1.0);
        if hue < 1.0 / 6.0 {
            m1 + (m2 - m1) * hue * 6.0
        } else if hue < 0.5 {
            m2
        } else if hue < 2.0 / 3.0 {
            m1 + (m2 - m1) * (2.0 / 3.0 - hue) * 6.0
        } else {
            m1
        }
    };
    [channel(h + 1.0 / 3.0), channel(h), channel(h - 1.0 / 3.0)]
}
