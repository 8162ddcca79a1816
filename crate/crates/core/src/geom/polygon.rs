//! Exact planar convex polygons: validated construction, areas, support
//! values, surface area measure, hulls, clipping, and symmetric differences.
//!
//! All predicates run in double precision with `SNAP`-relative snapping;
//! there is no exact rational fallback.

use serde::{Deserialize, Serialize};

use super::vec2::Vec2;
use crate::error::{Error, Result};

/// Relative snapping tolerance for geometric predicates.
pub const SNAP: f64 = 1e-12;

/// A strictly convex polygon, counterclockwise, with the origin strictly in
/// its interior. Edge `i` runs from vertex `i` to vertex `i + 1` (cyclic).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct Polygon {
    vertices: Vec<Vec2>,
    normals: Vec<Vec2>, // outward unit normal per edge
    lengths: Vec<f64>,  // edge length per edge
    area: f64,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    vertices: Vec<[f64; 2]>,
}

impl TryFrom<PolygonRepr> for Polygon {
    type Error = Error;
    fn try_from(repr: PolygonRepr) -> Result<Polygon> {
        let pts: Vec<Vec2> = repr.vertices.into_iter().map(Vec2::from).collect();
        Polygon::from_vertices(&pts)
    }
}

impl From<Polygon> for PolygonRepr {
    fn from(p: Polygon) -> PolygonRepr {
        PolygonRepr {
            vertices: p.vertices.iter().map(|&v| v.into()).collect(),
        }
    }
}

fn shoelace(vs: &[Vec2]) -> f64 {
    let n = vs.len();
    let mut twice = 0.0;
    for i in 0..n {
        twice += vs[i].cross(vs[(i + 1) % n]);
    }
    0.5 * twice
}

fn coordinate_scale(vs: &[Vec2]) -> f64 {
    vs.iter()
        .map(|v| v.x.abs().max(v.y.abs()))
        .fold(0.0, f64::max)
        .max(1e-300)
}

impl Polygon {
    /// Validates an arbitrary vertex list into a polygon.
    ///
    /// Exact duplicate points are dropped and clockwise input is reversed;
    /// anything else that violates the invariants is an error: fewer than
    /// three distinct points or zero area (`DegenerateInput`), a non-strictly
    /// convex triple (`NotConvex`), or an edge line not strictly separating
    /// the origin (`OriginNotInterior`).
    pub fn from_vertices(points: &[Vec2]) -> Result<Polygon> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegenerateInput(
                "non-finite vertex coordinate".into(),
            ));
        }
        let mut vs: Vec<Vec2> = Vec::with_capacity(points.len());
        for &p in points {
            if vs.last() != Some(&p) {
                vs.push(p);
            }
        }
        while vs.len() > 1 && vs.first() == vs.last() {
            vs.pop();
        }
        if vs.len() < 3 {
            return Err(Error::DegenerateInput(format!(
                "need at least 3 distinct vertices, got {}",
                vs.len()
            )));
        }
        let scale = coordinate_scale(&vs);
        let area = shoelace(&vs);
        if area.abs() <= SNAP * scale * scale {
            return Err(Error::DegenerateInput("zero enclosed area".into()));
        }
        if area < 0.0 {
            vs.reverse();
        }
        let n = vs.len();
        for i in 0..n {
            let a = vs[i];
            let b = vs[(i + 1) % n];
            let c = vs[(i + 2) % n];
            let e1 = b - a;
            let e2 = c - b;
            if e1.cross(e2) <= SNAP * e1.norm() * e2.norm() {
                return Err(Error::NotConvex {
                    a: a.into(),
                    b: b.into(),
                    c: c.into(),
                });
            }
        }
        Self::finish(vs, scale)
    }

    /// Relaxed constructor for internally generated loops (clips, hulls,
    /// halfspace intersections): merges near-duplicate and near-collinear
    /// vertices at the snapping tolerance before validating.
    pub(crate) fn from_loop(mut vs: Vec<Vec2>) -> Result<Polygon> {
        if vs.len() >= 3 && shoelace(&vs) < 0.0 {
            vs.reverse();
        }
        let scale = coordinate_scale(&vs);
        loop {
            let before = vs.len();
            let mut out: Vec<Vec2> = Vec::with_capacity(vs.len());
            for &p in &vs {
                if out.last().is_none_or(|&q| (p - q).norm() > SNAP * scale) {
                    out.push(p);
                }
            }
            while out.len() > 1 && (out[0] - *out.last().unwrap()).norm() <= SNAP * scale {
                out.pop();
            }
            if out.len() >= 3 {
                let mut kept: Vec<Vec2> = Vec::with_capacity(out.len());
                let n = out.len();
                for i in 0..n {
                    let a = out[(i + n - 1) % n];
                    let b = out[i];
                    let c = out[(i + 1) % n];
                    let e1 = b - a;
                    let e2 = c - b;
                    if e1.cross(e2).abs() > SNAP * e1.norm() * e2.norm() {
                        kept.push(b);
                    }
                }
                out = kept;
            }
            let stable = out.len() == before;
            vs = out;
            if stable || vs.len() < 3 {
                break;
            }
        }
        if vs.len() < 3 {
            return Err(Error::DegenerateInput(
                "loop collapsed under snapping".into(),
            ));
        }
        let n = vs.len();
        for i in 0..n {
            let a = vs[i];
            let b = vs[(i + 1) % n];
            let c = vs[(i + 2) % n];
            let e1 = b - a;
            let e2 = c - b;
            if e1.cross(e2) <= 0.0 {
                return Err(Error::NotConvex {
                    a: a.into(),
                    b: b.into(),
                    c: c.into(),
                });
            }
        }
        Self::finish(vs, scale)
    }

    fn finish(vs: Vec<Vec2>, scale: f64) -> Result<Polygon> {
        let n = vs.len();
        let mut normals = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        for i in 0..n {
            let e = vs[(i + 1) % n] - vs[i];
            let len = e.norm();
            // Outward normal of a CCW edge: rotate the edge direction by -90 degrees.
            let normal = Vec2::new(e.y / len, -e.x / len);
            let h = normal.dot(vs[i]);
            if h <= SNAP * scale {
                return Err(Error::OriginNotInterior { distance: h });
            }
            normals.push(normal);
            lengths.push(len);
        }
        let area = shoelace(&vs);
        Ok(Polygon {
            vertices: vs,
            normals,
            lengths,
            area,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    /// Outward unit normal of edge `i`.
    pub fn edge_normals(&self) -> &[Vec2] {
        &self.normals
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Enclosed (shoelace) area.
    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Support value max over vertices of `<v, u>`. `u` need not be unit here;
    /// the public oracle in [`super::body::Body`] enforces unit directions.
    pub fn support(&self, u: Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Support value of the edge line `i`, i.e. `<v_i, n_i>`.
    pub fn edge_support(&self, i: usize) -> f64 {
        self.normals[i].dot(self.vertices[i])
    }

    /// Dilation about the origin by `s > 0`.
    pub fn scale(&self, s: f64) -> Polygon {
        let vs: Vec<Vec2> = self.vertices.iter().map(|&v| v * s).collect();
        Polygon::from_loop(vs).expect("dilation of a valid polygon stays valid")
    }

    /// One atom per edge: outward unit normal weighted by edge length.
    pub fn surface_measure(&self) -> SurfaceMeasure {
        SurfaceMeasure {
            atoms: self
                .normals
                .iter()
                .copied()
                .zip(self.lengths.iter().copied())
                .collect(),
        }
    }

    /// Convex hull of the vertex union. Its support function is the
    /// pointwise maximum of the two support functions.
    pub fn hull_union(&self, other: &Polygon) -> Polygon {
        let mut pts: Vec<Vec2> = Vec::with_capacity(self.vertices.len() + other.vertices.len());
        pts.extend_from_slice(&self.vertices);
        pts.extend_from_slice(&other.vertices);
        let hull = convex_hull(&mut pts);
        Polygon::from_loop(hull).expect("hull of two valid polygons is a valid polygon")
    }

    /// Exact convex clipping. Both polygons contain the origin, so the
    /// intersection is nonempty with the origin interior.
    pub fn intersection(&self, other: &Polygon) -> Polygon {
        let mut current: Vec<Vec2> = self.vertices.clone();
        for i in 0..other.vertices.len() {
            current = clip_halfplane(&current, other.normals[i], other.edge_support(i));
        }
        Polygon::from_loop(current)
            .expect("intersection of origin-interior polygons is a valid polygon")
    }

    /// `area(P) + area(Q) - 2 area(P and Q)`.
    pub fn symmetric_difference_area(&self, other: &Polygon) -> f64 {
        self.area + other.area - 2.0 * self.intersection(other).area
    }
}

/// Surface area measure of a polygon: atoms `(unit normal, edge length)`.
/// The weighted normals sum to zero (closure of the measure).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceMeasure {
    pub atoms: Vec<(Vec2, f64)>,
}

impl SurfaceMeasure {
    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|&(_, w)| w).sum()
    }

    /// Norm of the weighted normal sum; zero up to rounding for any closed
    /// convex polygon.
    pub fn closure_defect(&self) -> f64 {
        self.atoms
            .iter()
            .fold(Vec2::ZERO, |acc, &(n, w)| acc + n * w)
            .norm()
    }
}

/// Keep the part of a convex loop on the side `<x, n> <= h`.
pub(crate) fn clip_halfplane(poly: &[Vec2], n: Vec2, h: f64) -> Vec<Vec2> {
    let len = poly.len();
    if len < 3 {
        return Vec::new();
    }
    let mut out: Vec<Vec2> = Vec::with_capacity(len + 2);
    for i in 0..len {
        let s = poly[i];
        let e = poly[(i + 1) % len];
        let sc = h - n.dot(s);
        let ec = h - n.dot(e);
        let s_in = sc >= 0.0;
        let e_in = ec >= 0.0;
        match (s_in, e_in) {
            (true, true) => out.push(e),
            (true, false) | (false, true) => {
                let denom = sc - ec;
                if denom.abs() > 0.0 {
                    let t = sc / denom;
                    out.push(s + (e - s) * t);
                }
                if e_in {
                    out.push(e);
                }
            }
            (false, false) => {}
        }
    }
    out
}

/// Andrew's monotone chain. Returns the hull CCW; collinear points dropped.
pub(crate) fn convex_hull(points: &mut [Vec2]) -> Vec<Vec2> {
    points.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    let n = points.len();
    if n < 3 {
        return points.to_vec();
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * n);
    for &p in points.iter() {
        while hull.len() >= 2 {
            let q = hull[hull.len() - 1];
            let r = hull[hull.len() - 2];
            if (q - r).cross(p - q) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in points.iter().rev().skip(1) {
        while hull.len() >= lower_len {
            let q = hull[hull.len() - 1];
            let r = hull[hull.len() - 2];
            if (q - r).cross(p - q) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.pop();
    hull
}
