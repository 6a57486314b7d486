use nalgebra::{Point2, Point3, Vector3};

use crate::error::{Error, Result};

/// Minimum separation between consecutive polyline or contour points, mm.
pub const MIN_POINT_SEPARATION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    origin: Point3<f64>,
    normal: Vector3<f64>,
}

impl Plane {
    /// Builds a plane; `normal` is normalized and must be non-zero.
    pub fn new(origin: Point3<f64>, normal: Vector3<f64>) -> Result<Self> {
        let len = normal.norm();
        if !len.is_finite() || len < 1e-12 {
            return Err(Error::InvalidPlane(format!("normal has length {len}")));
        }
        if !(origin.x.is_finite() && origin.y.is_finite() && origin.z.is_finite()) {
            return Err(Error::InvalidPlane("non-finite origin".into()));
        }
        Ok(Plane {
            origin,
            normal: normal / len,
        })
    }

    /// Horizontal plane `z = height` with normal +z.
    pub fn horizontal(height: f64) -> Self {
        Plane {
            origin: Point3::new(0.0, 0.0, height),
            normal: Vector3::z(),
        }
    }

    pub fn origin(&self) -> Point3<f64> {
        self.origin
    }

    pub fn normal(&self) -> Vector3<f64> {
        self.normal
    }

    pub fn signed_distance(&self, p: &Point3<f64>) -> f64 {
        (p - self.origin).dot(&self.normal)
    }

    /// In-plane orthonormal axes `(u, v)` with `u × v = normal`. For the +z
    /// normal these are the x and y axes.
    pub fn frame(&self) -> (Vector3<f64>, Vector3<f64>) {
        let n = self.normal;
        let helper = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
            Vector3::x()
        } else if n.y.abs() <= n.z.abs() {
            Vector3::y()
        } else {
            Vector3::z()
        };
        let u = (helper - n * helper.dot(&n)).normalize();
        let v = n.cross(&u);
        (u, v)
    }

    pub fn project(&self, p: &Point3<f64>) -> Point2<f64> {
        let (u, v) = self.frame();
        let d = p - self.origin;
        Point2::new(d.dot(&u), d.dot(&v))
    }

    pub fn lift(&self, q: &Point2<f64>) -> Point3<f64> {
        let (u, v) = self.frame();
        self.origin + u * q.x + v * q.y
    }

    pub fn offset(&self, distance: f64) -> Plane {
        Plane {
            origin: self.origin + self.normal * distance,
            normal: self.normal,
        }
    }
}

/// Ordered point sequence, open or closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point3<f64>>,
    closed: bool,
}

impl Polyline {
    pub fn new(points: Vec<Point3<f64>>, closed: bool) -> Result<Self> {
        let min = if closed { 3 } else { 2 };
        if points.len() < min {
            return Err(Error::InvalidPolyline(format!(
                "{} point(s), need at least {min}",
                points.len()
            )));
        }
        let n = points.len();
        let pairs = if closed { n } else { n - 1 };
        for i in 0..pairs {
            let (a, b) = (points[i], points[(i + 1) % n]);
            if (b - a).norm() <= MIN_POINT_SEPARATION {
                return Err(Error::InvalidPolyline(format!(
                    "points {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        Ok(Polyline { points, closed })
    }

    /// Closed polygonal approximation of a circle.
    pub fn circle(center: Point3<f64>, normal: Vector3<f64>, radius: f64, segments: usize) -> Result<Self> {
        let plane = Plane::new(center, normal)?;
        let pts = (0..segments)
            .map(|j| {
                let a = std::f64::consts::TAU * j as f64 / segments as f64;
                plane.lift(&Point2::new(radius * a.cos(), radius * a.sin()))
            })
            .collect();
        Polyline::new(pts, true)
    }

    pub fn points(&self) -> &[Point3<f64>] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point3<f64>, Point3<f64>)> + '_ {
        let n = self.points.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn map_points(&self, f: impl Fn(&Point3<f64>) -> Point3<f64>) -> Polyline {
        Polyline {
            points: self.points.iter().map(f).collect(),
            closed: self.closed,
        }
    }
}

/// Closed simple polygon in a section plane's local frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour2D {
    points: Vec<Point2<f64>>,
}

impl Contour2D {
    pub fn new(points: Vec<Point2<f64>>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidContour { index: 0, reason };
        if points.len() < 3 {
            return Err(invalid(format!("{} point(s), need at least 3", points.len())));
        }
        let n = points.len();
        for i in 0..n {
            let (a, b) = (points[i], points[(i + 1) % n]);
            if !(a.x.is_finite() && a.y.is_finite()) {
                return Err(invalid(format!("point {i} is not finite")));
            }
            if (b - a).norm() <= MIN_POINT_SEPARATION {
                return Err(invalid(format!("points {i} and {} coincide", (i + 1) % n)));
            }
        }
        let contour = Contour2D { points };
        if contour.signed_area() == 0.0 {
            return Err(invalid("zero signed area".into()));
        }
        if let Some((i, j)) = first_crossing(&[&contour]) {
            return Err(invalid(format!(
                "self-intersecting at segments {} and {}",
                i.1, j.1
            )));
        }
        Ok(contour)
    }

    pub fn points(&self) -> &[Point2<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Shoelace area; positive for counter-clockwise contours.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        0.5 * (0..n)
            .map(|i| {
                let (a, b) = (self.points[i], self.points[(i + 1) % n]);
                a.x * b.y - b.x * a.y
            })
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2<f64>, Point2<f64>)> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    /// Even-odd point containment. Points exactly on the boundary may go
    /// either way.
    pub fn contains(&self, p: &Point2<f64>) -> bool {
        let mut inside = false;
        for (a, b) in self.segments() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn reversed(&self) -> Contour2D {
        let mut points = self.points.clone();
        points.reverse();
        Contour2D { points }
    }

    pub(crate) fn from_points_unchecked(points: Vec<Point2<f64>>) -> Self {
        Contour2D { points }
    }
}

fn orient(a: Point2<f64>, b: Point2<f64>, c: Point2<f64>) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point2<f64>, b: Point2<f64>, p: Point2<f64>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test, touching included.
pub fn segments_intersect(a: Point2<f64>, b: Point2<f64>, c: Point2<f64>, d: Point2<f64>) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Finds the first pair of intersecting segments across `contours`, ignoring
/// the shared endpoint of consecutive segments in one contour. Segments are
/// identified as `(contour index, segment index)`.
pub(crate) fn first_crossing(contours: &[&Contour2D]) -> Option<((usize, usize), (usize, usize))> {
    struct Seg {
        id: (usize, usize),
        a: Point2<f64>,
        b: Point2<f64>,
        xmin: f64,
        xmax: f64,
    }
    let mut segs: Vec<Seg> = contours
        .iter()
        .enumerate()
        .flat_map(|(c, contour)| {
            contour.segments().enumerate().map(move |(s, (a, b))| Seg {
                id: (c, s),
                a,
                b,
                xmin: a.x.min(b.x),
                xmax: a.x.max(b.x),
            })
        })
        .collect();
    segs.sort_by(|p, q| p.xmin.total_cmp(&q.xmin).then(p.id.cmp(&q.id)));
    let adjacent = |p: (usize, usize), q: (usize, usize)| {
        if p.0 != q.0 {
            return false;
        }
        let n = contours[p.0].len();
        (p.1 + 1) % n == q.1 || (q.1 + 1) % n == p.1
    };
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if segs[j].xmin > segs[i].xmax {
                break;
            }
            let (s, t) = (&segs[i], &segs[j]);
            if s.a.y.max(s.b.y) < t.a.y.min(t.b.y) || t.a.y.max(t.b.y) < s.a.y.min(s.b.y) {
                continue;
            }
            if adjacent(s.id, t.id) {
                // Consecutive segments may only share their common vertex;
                // collinear overlap is still a crossing.
                let shared = if (s.id.1 + 1) % contours[s.id.0].len() == t.id.1 { s.b } else { s.a };
                let (far_s, far_t) = if shared == s.b { (s.a, t.b) } else { (s.b, t.a) };
                let overlap = orient(shared, far_s, far_t) == 0.0
                    && (far_s - shared).dot(&(far_t - shared)) > 0.0;
                if overlap {
                    return Some((s.id.min(t.id), s.id.max(t.id)));
                }
                continue;
            }
            if segments_intersect(s.a, s.b, t.a, t.b) {
                return Some((s.id.min(t.id), s.id.max(t.id)));
            }
        }
    }
    None
}
