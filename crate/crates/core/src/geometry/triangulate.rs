//! Region meshing for slice cross-sections.
//!
//! Contours are split to the target edge length, a lattice of interior
//! Steiner points is added, and the constrained Delaunay triangulation of the
//! result is clipped to the region by even-odd parity. Any edge still longer
//! than the target is then removed by conforming midpoint refinement.

use std::collections::{HashMap, HashSet};

use nalgebra::Point2;
use spade::{ConstrainedDelaunayTriangulation, Triangulation};

use super::mesh::{edge_key, EdgeKey};
use super::shapes::{first_crossing, Contour2D};
use crate::error::{Error, Result};

const MAX_REFINE_ROUNDS: usize = 64;

/// Planar triangle mesh with counter-clockwise triangles.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Mesh2D {
    pub points: Vec<Point2<f64>>,
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh2D {
    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.points[i]);
        0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn centroid(&self, t: usize) -> Point2<f64> {
        let [a, b, c] = self.triangles[t].map(|i| self.points[i]);
        Point2::from((a.coords + b.coords + c.coords) / 3.0)
    }

    pub fn edges(&self) -> HashSet<EdgeKey> {
        self.triangles
            .iter()
            .flat_map(|&[a, b, c]| [edge_key(a, b), edge_key(b, c), edge_key(c, a)])
            .collect()
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges()
            .into_iter()
            .map(|(a, b)| (self.points[a] - self.points[b]).norm())
            .fold(0.0, f64::max)
    }

    /// Appends `other`, offsetting its indices.
    pub fn append(&mut self, other: &Mesh2D) {
        let offset = self.points.len();
        self.points.extend_from_slice(&other.points);
        self.triangles
            .extend(other.triangles.iter().map(|t| t.map(|i| i + offset)));
    }
}

/// Nesting depth of each contour (how many other contours enclose it).
pub fn nesting_depths(contours: &[Contour2D]) -> Vec<usize> {
    contours
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let probe = c.points()[0];
            contours
                .iter()
                .enumerate()
                .filter(|&(j, other)| j != i && other.contains(&probe))
                .count()
        })
        .collect()
}

/// Signed area of the region bounded by consistently nested contours.
pub fn region_area(contours: &[Contour2D]) -> f64 {
    contours.iter().map(Contour2D::signed_area).sum()
}

/// Checks that contours do not cross and that orientation matches depth:
/// even depth counter-clockwise (outer), odd depth clockwise (hole).
pub fn validate_nesting(contours: &[Contour2D]) -> Result<Vec<usize>> {
    let refs: Vec<&Contour2D> = contours.iter().collect();
    if let Some((a, b)) = first_crossing(&refs) {
        if a.0 == b.0 {
            return Err(Error::InvalidContour {
                index: a.0,
                reason: format!("self-intersecting at segments {} and {}", a.1, b.1),
            });
        }
        return Err(Error::ContourIntersection { a: a.0, b: b.0 });
    }
    let depths = nesting_depths(contours);
    for (i, (c, &depth)) in contours.iter().zip(&depths).enumerate() {
        let ccw = c.signed_area() > 0.0;
        if ccw != (depth % 2 == 0) {
            return Err(Error::ImproperNesting(format!(
                "contour {i} at depth {depth} is {} but should be {}",
                if ccw { "counter-clockwise" } else { "clockwise" },
                if depth % 2 == 0 { "counter-clockwise (outer)" } else { "clockwise (hole)" },
            )));
        }
    }
    Ok(depths)
}

fn inside_region(contours: &[Contour2D], p: &Point2<f64>) -> bool {
    contours.iter().filter(|c| c.contains(p)).count() % 2 == 1
}

/// Triangulates the region enclosed by outer contours minus holes, with no
/// edge longer than `max_edge`.
pub fn triangulate_region(contours: &[Contour2D], max_edge: f64) -> Result<Mesh2D> {
    if !(max_edge > 0.0 && max_edge.is_finite()) {
        return Err(Error::Domain {
            what: "max_edge",
            value: max_edge,
            domain: "(0, inf)",
        });
    }
    if contours.is_empty() {
        return Ok(Mesh2D::default());
    }
    validate_nesting(contours)?;

    // Boundary loops with every piece at most max_edge long.
    let loops: Vec<Vec<Point2<f64>>> = contours
        .iter()
        .map(|c| {
            let mut pts = Vec::new();
            for (a, b) in c.segments() {
                let pieces = ((b - a).norm() / max_edge).ceil().max(1.0) as usize;
                for k in 0..pieces {
                    pts.push(a + (b - a) * (k as f64 / pieces as f64));
                }
            }
            pts
        })
        .collect();

    let mut cdt = ConstrainedDelaunayTriangulation::<spade::Point2<f64>>::new();
    let insert = |cdt: &mut ConstrainedDelaunayTriangulation<spade::Point2<f64>>, p: Point2<f64>| {
        cdt.insert(spade::Point2::new(p.x, p.y))
            .map_err(|e| Error::Consistency(format!("triangulation insert failed: {e:?}")))
    };
    for pts in &loops {
        let handles = pts
            .iter()
            .map(|&p| insert(&mut cdt, p))
            .collect::<Result<Vec<_>>>()?;
        for k in 0..handles.len() {
            let (from, to) = (handles[k], handles[(k + 1) % handles.len()]);
            if from != to && cdt.try_add_constraint(from, to).is_empty() && !cdt.exists_constraint(from, to) {
                return Err(Error::Consistency("boundary constraint could not be inserted".into()));
            }
        }
    }
    for p in steiner_points(&loops, contours, max_edge) {
        insert(&mut cdt, p)?;
    }

    let points: Vec<Point2<f64>> = cdt
        .vertices()
        .map(|v| {
            let p = v.position();
            Point2::new(p.x, p.y)
        })
        .collect();
    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        let idx = face.vertices().map(|v| v.fix().index());
        let [a, b, c] = idx.map(|i| points[i]);
        let centroid = Point2::from((a.coords + b.coords + c.coords) / 3.0);
        if inside_region(contours, &centroid) {
            triangles.push(idx);
        }
    }
    let mut mesh = Mesh2D { points, triangles };
    drop_unused_points(&mut mesh);
    refine_long_edges(&mut mesh, max_edge)?;
    Ok(mesh)
}

/// Interior lattice points on a triangular grid of pitch `max_edge`, kept away
/// from the boundary by at least half a pitch.
fn steiner_points(loops: &[Vec<Point2<f64>>], contours: &[Contour2D], max_edge: f64) -> Vec<Point2<f64>> {
    let h = max_edge * 0.9;
    let clearance = 0.5 * h;
    let segs: Vec<(Point2<f64>, Point2<f64>)> = loops
        .iter()
        .flat_map(|pts| (0..pts.len()).map(move |k| (pts[k], pts[(k + 1) % pts.len()])))
        .collect();
    let (mut lo, mut hi) = (segs[0].0, segs[0].0);
    for (a, _) in &segs {
        lo = lo.inf(a);
        hi = hi.sup(a);
    }

    // Segment buckets for the clearance query.
    let cell = h;
    let key = |p: Point2<f64>| (((p.x - lo.x) / cell).floor() as i64, ((p.y - lo.y) / cell).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (s, (a, b)) in segs.iter().enumerate() {
        let (ka, kb) = (key(a.inf(b)), key(a.sup(b)));
        for i in ka.0..=kb.0 {
            for j in ka.1..=kb.1 {
                buckets.entry((i, j)).or_default().push(s);
            }
        }
    }
    let near_boundary = |p: Point2<f64>| {
        let (ci, cj) = key(p);
        for i in ci - 1..=ci + 1 {
            for j in cj - 1..=cj + 1 {
                if let Some(list) = buckets.get(&(i, j)) {
                    for &s in list {
                        let (a, b) = segs[s];
                        let ab = b - a;
                        let t = ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
                        if (p - (a + ab * t)).norm() < clearance {
                            return true;
                        }
                    }
                }
            }
        }
        false
    };

    // Scanline fill: crossings of each row with all contour segments.
    let row_pitch = h * 3f64.sqrt() / 2.0;
    let mut out = Vec::new();
    let rows = ((hi.y - lo.y) / row_pitch).floor() as i64;
    for r in 1..=rows {
        let y = lo.y + r as f64 * row_pitch;
        let mut xs: Vec<f64> = contours
            .iter()
            .flat_map(|c| c.segments())
            .filter(|(a, b)| (a.y > y) != (b.y > y))
            .map(|(a, b)| a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y))
            .collect();
        xs.sort_by(f64::total_cmp);
        let shift = if r % 2 == 0 { 0.0 } else { 0.5 * h };
        for span in xs.chunks_exact(2) {
            let first = ((span[0] - lo.x - shift) / h).ceil() as i64;
            let last = ((span[1] - lo.x - shift) / h).floor() as i64;
            for k in first..=last {
                let p = Point2::new(lo.x + shift + k as f64 * h, y);
                if p.x > span[0] && p.x < span[1] && !near_boundary(p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn drop_unused_points(mesh: &mut Mesh2D) {
    let mut remap = vec![usize::MAX; mesh.points.len()];
    let mut points = Vec::with_capacity(mesh.points.len());
    for tri in &mut mesh.triangles {
        for v in tri.iter_mut() {
            if remap[*v] == usize::MAX {
                remap[*v] = points.len();
                points.push(mesh.points[*v]);
            }
            *v = remap[*v];
        }
    }
    mesh.points = points;
}

/// Conforming red-green refinement: every edge longer than `max_edge` is split
/// at its midpoint in all triangles that share it.
fn refine_long_edges(mesh: &mut Mesh2D, max_edge: f64) -> Result<()> {
    for _ in 0..MAX_REFINE_ROUNDS {
        let long: HashSet<EdgeKey> = mesh
            .edges()
            .into_iter()
            .filter(|&(a, b)| (mesh.points[a] - mesh.points[b]).norm() > max_edge)
            .collect();
        if long.is_empty() {
            return Ok(());
        }
        let mut mids: HashMap<EdgeKey, usize> = HashMap::new();
        let mut points = std::mem::take(&mut mesh.points);
        let mut mid = |a: usize, b: usize, points: &mut Vec<Point2<f64>>| {
            *mids.entry(edge_key(a, b)).or_insert_with(|| {
                points.push(nalgebra::center(&points[a], &points[b]));
                points.len() - 1
            })
        };
        let mut next = Vec::with_capacity(mesh.triangles.len() * 2);
        for &tri in &mesh.triangles {
            let marked = [0, 1, 2].map(|k| long.contains(&edge_key(tri[k], tri[(k + 1) % 3])));
            match marked.iter().filter(|m| **m).count() {
                0 => next.push(tri),
                1 => {
                    let k = marked.iter().position(|m| *m).unwrap();
                    let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                    let m = mid(a, b, &mut points);
                    next.extend([[a, m, c], [m, b, c]]);
                }
                2 => {
                    // Rotate so that edges ab and bc are marked.
                    let free = marked.iter().position(|m| !*m).unwrap();
                    let (c, a, b) = (tri[free], tri[(free + 1) % 3], tri[(free + 2) % 3]);
                    let m1 = mid(a, b, &mut points);
                    let m2 = mid(b, c, &mut points);
                    next.push([m1, b, m2]);
                    if (points[a] - points[m2]).norm() <= (points[m1] - points[c]).norm() {
                        next.extend([[a, m1, m2], [a, m2, c]]);
                    } else {
                        next.extend([[a, m1, c], [m1, m2, c]]);
                    }
                }
                _ => {
                    let [a, b, c] = tri;
                    let (ab, bc, ca) = (mid(a, b, &mut points), mid(b, c, &mut points), mid(c, a, &mut points));
                    next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
                }
            }
        }
        mesh.points = points;
        mesh.triangles = next;
    }
    Err(Error::Consistency(format!(
        "edge refinement did not reach max_edge {max_edge} in {MAX_REFINE_ROUNDS} rounds"
    )))
}
