//! Offset gradient references: a family of nested closed contours, each gap
//! split into `r_m` linear sub-regions.

use nalgebra::{Point2, Point3, Vector3};

use crate::error::{Error, Result};
use crate::geometry::distance::point_polyline_distance;
use crate::geometry::shapes::first_crossing;
use crate::geometry::{Contour2D, Plane, Polyline};
use crate::material::CompositionVector;

/// Which neighbour the sub-region index `i` counts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetDirection {
    /// `i = 0` sits on the inner contour `C_{r+1}`.
    Inwards,
    /// `i = 0` sits on the outer contour `C_r`.
    Outwards,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OffsetContour {
    pub line: Polyline,
    pub composition: CompositionVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OffsetRegion {
    contours: Vec<OffsetContour>,
    direction: OffsetDirection,
    subdivisions: Vec<usize>,
    plane: Plane,
    outlines: Vec<Contour2D>,
}

impl OffsetRegion {
    /// `contours` run from the outermost `C_1` inwards; `subdivisions[g]` is
    /// `r_m` for the gap between contour `g + 1` and `g + 2` (1-based).
    pub fn new(contours: Vec<OffsetContour>, direction: OffsetDirection, subdivisions: Vec<usize>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidRegion {
            cell: String::new(),
            reason,
        };
        if contours.len() < 2 {
            return Err(invalid(format!("offset region needs at least 2 contours, got {}", contours.len())));
        }
        if subdivisions.len() != contours.len() - 1 {
            return Err(invalid(format!(
                "{} contours need {} subdivision counts, got {}",
                contours.len(),
                contours.len() - 1,
                subdivisions.len()
            )));
        }
        if let Some(g) = subdivisions.iter().position(|&n| n == 0) {
            return Err(invalid(format!("gap {} has zero sub-regions", g + 1)));
        }
        let k = contours[0].composition.len();
        for (r, c) in contours.iter().enumerate() {
            if !c.line.is_closed() {
                return Err(invalid(format!("contour {} is not closed", r + 1)));
            }
            c.composition.expect_len(k)?;
        }

        let plane = best_fit_plane(contours[0].line.points())?;
        let mut outlines = Vec::with_capacity(contours.len());
        for (r, c) in contours.iter().enumerate() {
            let pts: Vec<Point2<f64>> = c.line.points().iter().map(|p| plane.project(p)).collect();
            let outline = Contour2D::new(pts)
                .map_err(|e| invalid(format!("contour {} does not project to a simple loop: {e}", r + 1)))?;
            outlines.push(outline);
        }
        for r in 0..outlines.len() - 1 {
            let (outer, inner) = (&outlines[r], &outlines[r + 1]);
            if first_crossing(&[outer, inner]).is_some() || !inner.points().iter().all(|p| outer.contains(p)) {
                return Err(invalid(format!("contour {} is not nested inside contour {}", r + 2, r + 1)));
            }
        }
        Ok(OffsetRegion {
            contours,
            direction,
            subdivisions,
            plane,
            outlines,
        })
    }

    pub fn contours(&self) -> &[OffsetContour] {
        &self.contours
    }

    pub fn direction(&self) -> OffsetDirection {
        self.direction
    }

    pub fn subdivisions(&self) -> &[usize] {
        &self.subdivisions
    }

    fn gap(&self, r: usize) -> Result<(usize, &CompositionVector, &CompositionVector)> {
        if r < 1 || r >= self.contours.len() {
            return Err(Error::OutOfBounds {
                what: "contour gap",
                index: r,
                range: format!("[1, {})", self.contours.len()),
            });
        }
        Ok((
            self.subdivisions[r - 1],
            &self.contours[r - 1].composition,
            &self.contours[r].composition,
        ))
    }

    /// Composition of sub-region boundary `i` in gap `r` (1-based, between
    /// `C_r` and `C_{r+1}`).
    pub fn offset_subdivide(&self, r: usize, i: usize) -> Result<CompositionVector> {
        let (rm, outer, inner) = self.gap(r)?;
        if i > rm {
            return Err(Error::OutOfBounds {
                what: "sub-region",
                index: i,
                range: format!("[0, {rm}]"),
            });
        }
        let steps = match self.direction {
            OffsetDirection::Inwards => i,
            OffsetDirection::Outwards => rm - i,
        } as f64;
        let rm = rm as f64;
        Ok(CompositionVector::from_raw(
            outer
                .fractions()
                .iter()
                .zip(inner.fractions())
                .map(|(a, b)| steps * (a - b) / rm + b)
                .collect(),
        ))
    }

    /// Constant per-step composition change in gap `r`. Every step is checked
    /// against the first one.
    pub fn step_width(&self, r: usize) -> Result<Vec<f64>> {
        let (rm, _, _) = self.gap(r)?;
        let mut prev = self.offset_subdivide(r, 0)?;
        let mut width: Option<Vec<f64>> = None;
        for i in 1..=rm {
            let cur = self.offset_subdivide(r, i)?;
            let w: Vec<f64> = cur.fractions().iter().zip(prev.fractions()).map(|(a, b)| a - b).collect();
            match &width {
                None => width = Some(w),
                Some(first) => {
                    let dev = first.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    if dev > 1e-12 {
                        return Err(Error::Consistency(format!(
                            "step width in gap {r} varies by {dev:e} at sub-region {i}"
                        )));
                    }
                }
            }
            prev = cur;
        }
        Ok(width.expect("r_m >= 1"))
    }

    /// Composition at `p`: locate the gap by planar containment, then
    /// interpolate linearly inside the sub-region given by the normalized
    /// distance between the two bounding contours. Points outside `C_1` or
    /// inside the innermost contour take that contour's composition.
    pub fn evaluate(&self, p: &Point3<f64>) -> Result<CompositionVector> {
        let q = self.plane.project(p);
        let depth = self.outlines.iter().take_while(|c| c.contains(&q)).count();
        if depth == 0 {
            return Ok(self.contours[0].composition.clone());
        }
        if depth == self.contours.len() {
            return Ok(self.contours[depth - 1].composition.clone());
        }
        let r = depth;
        let d_outer = point_polyline_distance(p, &self.contours[r - 1].line);
        let d_inner = point_polyline_distance(p, &self.contours[r].line);
        let total = d_outer + d_inner;
        // Fraction of the way from C_{r+1} to C_r.
        let t = if total > 0.0 { (d_inner / total).clamp(0.0, 1.0) } else { 0.5 };
        let tau = match self.direction {
            OffsetDirection::Inwards => t,
            OffsetDirection::Outwards => 1.0 - t,
        };
        let rm = self.subdivisions[r - 1];
        let x = tau * rm as f64;
        let i = (x.floor() as usize).min(rm - 1);
        let frac = x - i as f64;
        let lo = self.offset_subdivide(r, i)?;
        let hi = self.offset_subdivide(r, i + 1)?;
        let mut v: Vec<f64> = lo
            .fractions()
            .iter()
            .zip(hi.fractions())
            .map(|(a, b)| a + frac * (b - a))
            .collect();
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > crate::material::composition::SUM_TOLERANCE {
            v.iter_mut().for_each(|c| *c /= sum);
        }
        Ok(CompositionVector::from_raw(v))
    }
}

/// Plane through the centroid with the Newell normal of a closed loop.
fn best_fit_plane(points: &[Point3<f64>]) -> Result<Plane> {
    let n = points.len();
    let mut normal = Vector3::zeros();
    let mut centroid = Vector3::zeros();
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        normal.x += (a.y - b.y) * (a.z + b.z);
        normal.y += (a.z - b.z) * (a.x + b.x);
        normal.z += (a.x - b.x) * (a.y + b.y);
        centroid += a.coords;
    }
    Plane::new(Point3::from(centroid / n as f64), normal)
}
