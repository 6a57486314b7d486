use std::collections::HashMap;

use nalgebra::{Point2, Point3};

use super::mesh::{edge_key, EdgeKey, TriangleMesh};
use super::shapes::{Contour2D, Plane, MIN_POINT_SEPARATION};
use crate::error::{Error, Result};

/// Distance at which open chain ends are joined by position, mm.
pub const CHAIN_TOLERANCE: f64 = 1e-7;

/// Plane shift applied when the section passes through a vertex, mm.
pub const SECTION_NUDGE: f64 = 1e-9;

const MAX_NUDGES: usize = 16;

/// Section of `mesh` by `plane` after any vertex-touching perturbation.
#[derive(Debug, Clone)]
pub struct Section {
    pub plane: Plane,
    pub contours: Vec<Contour2D>,
}

/// Closed intersection loops of a watertight mesh with a plane, in the plane's
/// `(u, v)` frame. Outer loops are counter-clockwise, holes clockwise.
pub fn intersect_mesh_plane(mesh: &TriangleMesh, plane: &Plane) -> Result<Vec<Contour2D>> {
    section(mesh, plane).map(|s| s.contours)
}

/// Like [`intersect_mesh_plane`] but also returns the plane actually used.
///
/// A plane containing a mesh vertex is shifted along its normal by
/// [`SECTION_NUDGE`] until no vertex lies on it.
pub fn section(mesh: &TriangleMesh, plane: &Plane) -> Result<Section> {
    let mut plane = *plane;
    let mut dist: Vec<f64> = Vec::new();
    for attempt in 0..=MAX_NUDGES {
        dist = mesh.vertices().iter().map(|v| plane.signed_distance(v)).collect();
        if dist.iter().all(|d| *d != 0.0) {
            break;
        }
        if attempt == MAX_NUDGES {
            return Err(Error::Consistency(
                "section plane still touches a vertex after perturbation".into(),
            ));
        }
        plane = plane.offset(SECTION_NUDGE);
    }

    let verts = mesh.vertices();
    let mut crossings: HashMap<EdgeKey, Point3<f64>> = HashMap::new();
    let mut crossing = |i: usize, j: usize| -> EdgeKey {
        let key = edge_key(i, j);
        crossings.entry(key).or_insert_with(|| {
            let (a, b) = key;
            let t = dist[a] / (dist[a] - dist[b]);
            verts[a] + (verts[b] - verts[a]) * t
        });
        key
    };

    // Directed segments: from the edge where the sign goes + to - (in
    // triangle order) to the edge where it goes - to +.
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for tri in mesh.triangles() {
        let above = tri.map(|v| dist[v] > 0.0);
        if above[0] == above[1] && above[1] == above[2] {
            continue;
        }
        let mut start = None;
        let mut end = None;
        for k in 0..3 {
            let (i, j) = (tri[k], tri[(k + 1) % 3]);
            match (above[k], above[(k + 1) % 3]) {
                (true, false) => start = Some(crossing(i, j)),
                (false, true) => end = Some(crossing(i, j)),
                _ => {}
            }
        }
        if let (Some(s), Some(e)) = (start, end) {
            segments.push((s, e));
        }
    }

    let chains = chain_segments(&segments, &crossings)?;
    let mut contours = Vec::with_capacity(chains.len());
    for chain in chains {
        let mut pts: Vec<Point2<f64>> = Vec::with_capacity(chain.len());
        for key in chain {
            let q = plane.project(&crossings[&key]);
            if pts.last().is_none_or(|last| (q - last).norm() > MIN_POINT_SEPARATION) {
                pts.push(q);
            }
        }
        while pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() <= MIN_POINT_SEPARATION {
            pts.pop();
        }
        if pts.len() < 3 {
            continue;
        }
        let index = contours.len();
        let contour = Contour2D::new(pts).map_err(|e| match e {
            Error::InvalidContour { reason, .. } => Error::InvalidContour { index, reason },
            other => other,
        })?;
        contours.push(contour);
    }
    Ok(Section { plane, contours })
}

/// Links directed segments into closed loops of edge keys.
fn chain_segments(
    segments: &[(EdgeKey, EdgeKey)],
    points: &HashMap<EdgeKey, Point3<f64>>,
) -> Result<Vec<Vec<EdgeKey>>> {
    let mut next: HashMap<EdgeKey, usize> = HashMap::with_capacity(segments.len());
    for (i, &(start, _)) in segments.iter().enumerate() {
        if next.insert(start, i).is_some() {
            let p = points[&start];
            return Err(Error::OpenChain { point: [p.x, p.y, p.z] });
        }
    }

    // Segment ends with no successor are joined to unmatched starts by position.
    let starts: std::collections::HashSet<EdgeKey> = segments.iter().map(|s| s.0).collect();
    let ends: std::collections::HashSet<EdgeKey> = segments.iter().map(|s| s.1).collect();
    let mut open_starts: Vec<usize> = (0..segments.len())
        .filter(|&i| !ends.contains(&segments[i].0))
        .collect();
    let mut bridge: HashMap<usize, usize> = HashMap::new();
    for (i, &(_, end)) in segments.iter().enumerate() {
        if starts.contains(&end) {
            continue;
        }
        let p = points[&end];
        let found = open_starts
            .iter()
            .position(|&j| (points[&segments[j].0] - p).norm() <= CHAIN_TOLERANCE);
        match found {
            Some(pos) => {
                bridge.insert(i, open_starts.swap_remove(pos));
            }
            None => return Err(Error::OpenChain { point: [p.x, p.y, p.z] }),
        }
    }
    if let Some(&j) = open_starts.first() {
        let p = points[&segments[j].0];
        return Err(Error::OpenChain { point: [p.x, p.y, p.z] });
    }

    let mut visited = vec![false; segments.len()];
    let mut chains = Vec::new();
    for first in 0..segments.len() {
        if visited[first] {
            continue;
        }
        let mut chain = Vec::new();
        let mut cur = first;
        loop {
            visited[cur] = true;
            chain.push(segments[cur].0);
            let succ = match bridge.get(&cur) {
                Some(&j) => j,
                None => next[&segments[cur].1],
            };
            if succ == first {
                break;
            }
            if visited[succ] {
                let p = points[&segments[succ].0];
                return Err(Error::OpenChain { point: [p.x, p.y, p.z] });
            }
            cur = succ;
        }
        chains.push(chain);
    }
    Ok(chains)
}
