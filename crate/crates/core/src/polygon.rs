//! Convex spherical polygons: hulls, extreme points and diameters.
//!
//! A polygon is stored as a counterclockwise vertex cycle (seen from outside the sphere)
//! strictly inside an open hemisphere. Vertices whose interior angle is a straight angle
//! are allowed; they are boundary points but not extreme points.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::quad::phi_unchecked;
use crate::sphere::{
    angle_at, antipode, distance, foot_of_perpendicular, GeodesicArc, GreatCircle, SpherePoint,
    Vec3, EPS_ANTIPODE, EPS_ON,
};

/// Minimum dot product of every vertex with the hemisphere center.
pub const EPS_HEMI: f64 = 1e-6;
/// Vertices with interior angle in `[pi - EPS_ANGLE, pi]` are not extreme.
pub const EPS_ANGLE: f64 = 1e-9;
/// Critical points closer than this (radians) to an arc endpoint are left to the
/// endpoint candidates.
const ENDPOINT_GAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalPolygon {
    vertices: Vec<SpherePoint>,
    #[serde(skip)]
    hemisphere_center: SpherePoint,
}

/// Wire form `{"vertices": [[x, y, z], ...]}`.
#[derive(Debug, Clone, Deserialize)]
pub struct PolygonFile {
    pub vertices: Vec<SpherePoint>,
}

impl<'de> Deserialize<'de> for SphericalPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = PolygonFile::deserialize(deserializer)?;
        SphericalPolygon::new(file.vertices).map_err(serde::de::Error::custom)
    }
}

fn unit_normal(a: &SpherePoint, b: &SpherePoint) -> Option<Vec3> {
    let n = a.vector().cross(b.vector());
    let len = n.norm();
    (len > 0.0).then(|| n / len)
}

impl SphericalPolygon {
    /// Validates a counterclockwise convex vertex cycle. A clockwise cycle is reversed.
    pub fn new(vertices: Vec<SpherePoint>) -> Result<Self> {
        let center = hemisphere_center(&vertices)?;
        Self::with_center(vertices, center)
    }

    fn with_center(mut vertices: Vec<SpherePoint>, hemisphere_center: SpherePoint) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewPoints(n));
        }
        if vertices.iter().any(|v| v.dot(&hemisphere_center) <= EPS_HEMI) {
            return Err(GeometryError::NoHemisphere);
        }
        for k in 0..n {
            let d = distance(&vertices[k], &vertices[(k + 1) % n]);
            if d <= EPS_ANTIPODE || d >= PI - EPS_ANTIPODE {
                return Err(GeometryError::InvalidPolygon(format!(
                    "vertices {k} and {} are equal or antipodal",
                    (k + 1) % n
                )));
            }
        }
        // Orientation from the signed area of the gnomonic image.
        let (e1, e2) = tangent_basis(&hemisphere_center);
        let proj: Vec<[f64; 2]> = vertices.iter().map(|p| gnomonic(p, &hemisphere_center, &e1, &e2)).collect();
        let area: f64 = (0..n)
            .map(|k| {
                let (a, b) = (proj[k], proj[(k + 1) % n]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        if area == 0.0 {
            return Err(GeometryError::DegenerateHull);
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let poly = SphericalPolygon { vertices, hemisphere_center };
        let mut strictly_inside = false;
        for (a, b) in poly.edges() {
            let nrm = unit_normal(&a, &b).ok_or(GeometryError::DegenerateHull)?;
            for v in &poly.vertices {
                let s = nrm.dot(v.vector());
                if s < -EPS_ON {
                    return Err(GeometryError::InvalidPolygon("vertex cycle is not convex".into()));
                }
                strictly_inside |= s > EPS_ON;
            }
        }
        if !strictly_inside {
            return Err(GeometryError::DegenerateHull);
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[SpherePoint] {
        &self.vertices
    }

    pub fn hemisphere_center(&self) -> &SpherePoint {
        &self.hemisphere_center
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges `(v_k, v_{k+1})`, cyclically.
    pub fn edges(&self) -> impl Iterator<Item = (SpherePoint, SpherePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }

    /// Interior angle at each vertex.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| {
                let prev = &self.vertices[(k + n - 1) % n];
                let next = &self.vertices[(k + 1) % n];
                angle_at(&self.vertices[k], prev, next).expect("validated polygon")
            })
            .collect()
    }

    /// Closed containment test, with [`EPS_ON`] slack on each edge.
    pub fn contains(&self, p: &SpherePoint) -> bool {
        p.dot(&self.hemisphere_center) > 0.0
            && self.edges().all(|(a, b)| {
                unit_normal(&a, &b).is_some_and(|n| n.dot(p.vector()) >= -EPS_ON)
            })
    }

    pub fn rotated(&self, rotation: &nalgebra::Rotation3<f64>) -> SphericalPolygon {
        SphericalPolygon {
            vertices: self.vertices.iter().map(|v| v.rotated(rotation)).collect(),
            hemisphere_center: self.hemisphere_center.rotated(rotation),
        }
    }
}

/// A center `c` with `<c, p> > EPS_HEMI` for every point.
///
/// Tries the normalized vector sum first, then a subgradient ascent on
/// `min_p <c, p>` over the sphere.
pub fn hemisphere_center(points: &[SpherePoint]) -> Result<SpherePoint> {
    if points.is_empty() {
        return Err(GeometryError::TooFewPoints(0));
    }
    let min_dot = |c: &Vec3| points.iter().map(|p| p.vector().dot(c)).fold(f64::INFINITY, f64::min);
    let sum: Vec3 = points.iter().map(|p| *p.vector()).sum();
    let mut c = if sum.norm() > 1e-12 { sum.normalize() } else { *points[0].vector() };
    let mut best = (min_dot(&c), c);
    if best.0 > EPS_HEMI {
        return Ok(SpherePoint::from_unit(c));
    }
    for iter in 0..20_000 {
        let worst = points
            .iter()
            .min_by(|a, b| a.vector().dot(&c).total_cmp(&b.vector().dot(&c)))
            .expect("non-empty");
        let step = 0.5 / (1.0 + iter as f64).sqrt();
        c = (c + worst.vector() * step).normalize();
        let m = min_dot(&c);
        if m > best.0 {
            best = (m, c);
        }
        if best.0 > 1e-3 {
            break;
        }
    }
    if best.0 > EPS_HEMI {
        Ok(SpherePoint::from_unit(best.1))
    } else {
        Err(GeometryError::NoHemisphere)
    }
}

/// Orthonormal `(e1, e2)` with `e1 x e2 = c`.
fn tangent_basis(c: &SpherePoint) -> (Vec3, Vec3) {
    let v = c.vector();
    let helper = if v.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (helper - v * v.dot(&helper)).normalize();
    let e2 = v.cross(&e1);
    (e1, e2)
}

/// Central projection onto the tangent plane at `c`; great circles become lines.
fn gnomonic(p: &SpherePoint, c: &SpherePoint, e1: &Vec3, e2: &Vec3) -> [f64; 2] {
    let w = p.dot(c);
    [p.vector().dot(e1) / w, p.vector().dot(e2) / w]
}

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// A left turn, with near-collinear triples (sine of the turn below 1e-12) treated as straight.
fn left_turn(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let oa = (a[0] - o[0]).hypot(a[1] - o[1]);
    let ob = (b[0] - o[0]).hypot(b[1] - o[1]);
    cross2(o, a, b) > 1e-12 * oa * ob
}

/// Convex hull of points inside an open hemisphere, via the gnomonic projection and a
/// monotone-chain planar hull. Points interior to hull edges are dropped.
pub fn convex_hull(points: &[SpherePoint]) -> Result<SphericalPolygon> {
    if points.len() < 3 {
        return Err(GeometryError::TooFewPoints(points.len()));
    }
    let center = hemisphere_center(points)?;
    let (e1, e2) = tangent_basis(&center);
    let mut idx: Vec<(usize, [f64; 2])> = points
        .iter()
        .enumerate()
        .map(|(k, p)| (k, gnomonic(p, &center, &e1, &e2)))
        .collect();
    idx.sort_by(|a, b| match a.1[0].total_cmp(&b.1[0]) {
        Ordering::Equal => a.1[1].total_cmp(&b.1[1]),
        o => o,
    });
    idx.dedup_by(|a, b| distance(&points[a.0], &points[b.0]) <= EPS_ANTIPODE);
    if idx.len() < 3 {
        return Err(GeometryError::DegenerateHull);
    }

    let mut hull: Vec<(usize, [f64; 2])> = Vec::with_capacity(2 * idx.len());
    for pass in [&idx[..], &idx.iter().rev().copied().collect::<Vec<_>>()[..]] {
        let base = hull.len();
        for &q in pass {
            while hull.len() >= base + 2 && !left_turn(hull[hull.len() - 2].1, hull[hull.len() - 1].1, q.1) {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(GeometryError::DegenerateHull);
    }
    let vertices = hull.iter().map(|&(k, _)| points[k]).collect();
    SphericalPolygon::with_center(vertices, center)
}

/// Vertices whose interior angle is strictly below `pi - EPS_ANGLE`.
pub fn extreme_points(polygon: &SphericalPolygon) -> Vec<SpherePoint> {
    polygon
        .vertices
        .iter()
        .zip(polygon.interior_angles())
        .filter(|(_, a)| *a < PI - EPS_ANGLE)
        .map(|(v, _)| *v)
        .collect()
}

/// Where the two ends of a diameter sit on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attainment {
    VertexVertex,
    VertexEdge,
    EdgeEdge,
}

impl Attainment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Attainment::VertexVertex => "vertex-vertex",
            Attainment::VertexEdge => "vertex-edge",
            Attainment::EdgeEdge => "edge-edge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiameterWitness {
    pub value: f64,
    pub p: SpherePoint,
    pub q: SpherePoint,
    pub attainment: Attainment,
}

fn strictly_inside_arc(arc: &GeodesicArc, x: &SpherePoint) -> bool {
    arc.contains(x, 0.0)
        && distance(arc.start(), x) > ENDPOINT_GAP
        && distance(arc.end(), x) > ENDPOINT_GAP
}

/// Diameter of the polygon, by exact enumeration of boundary critical pairs.
///
/// Candidates are every vertex pair, every vertex with the farthest point of each edge
/// (the antipode of its perpendicular foot, when that falls inside the edge), and every
/// edge pair joined by a geodesic orthogonal to both edges.
pub fn boundary_diameter(polygon: &SphericalPolygon) -> DiameterWitness {
    let verts = &polygon.vertices;
    let edges: Vec<(GeodesicArc, Option<GreatCircle>)> = polygon
        .edges()
        .map(|(a, b)| {
            let arc = GeodesicArc::new(a, b).expect("validated edge");
            let circle = unit_normal(&a, &b).and_then(SpherePoint::from_vector).map(GreatCircle::from_normal);
            (arc, circle)
        })
        .collect();

    let mut best = DiameterWitness {
        value: 0.0,
        p: verts[0],
        q: verts[0],
        attainment: Attainment::VertexVertex,
    };
    let mut offer = |value: f64, p: SpherePoint, q: SpherePoint, attainment: Attainment| {
        if value > best.value {
            best = DiameterWitness { value, p, q, attainment };
        }
    };

    for (k, p) in verts.iter().enumerate() {
        for q in &verts[k + 1..] {
            offer(distance(p, q), *p, *q, Attainment::VertexVertex);
        }
    }

    for p in verts {
        for (arc, circle) in &edges {
            let Some(circle) = circle else { continue };
            let Ok(foot) = foot_of_perpendicular(p, circle) else { continue };
            let far = antipode(&foot);
            if strictly_inside_arc(arc, &far) {
                offer(distance(p, &far), *p, far, Attainment::VertexEdge);
            }
        }
    }

    for (k, (arc1, c1)) in edges.iter().enumerate() {
        let Some(c1) = c1 else { continue };
        for (arc2, c2) in &edges[k + 1..] {
            let Some(c2) = c2 else { continue };
            let (n1, n2) = (c1.normal().vector(), c2.normal().vector());
            let m = n1.cross(n2);
            if m.norm() < 1e-12 {
                continue;
            }
            let m = m.normalize();
            let (Some(x), Some(y)) = (
                SpherePoint::from_vector(n1.cross(&m)),
                SpherePoint::from_vector(n2.cross(&m)),
            ) else {
                continue;
            };
            for x in [x, antipode(&x)] {
                if !strictly_inside_arc(arc1, &x) {
                    continue;
                }
                for y in [y, antipode(&y)] {
                    if strictly_inside_arc(arc2, &y) {
                        offer(distance(&x, &y), x, y, Attainment::EdgeEdge);
                    }
                }
            }
        }
    }
    best
}

/// Largest distance between two extreme points, with the pair realizing it.
pub fn extreme_diameter_pair(polygon: &SphericalPolygon) -> (f64, SpherePoint, SpherePoint) {
    let ext = extreme_points(polygon);
    let mut best = (0.0, ext[0], ext[0]);
    for (k, p) in ext.iter().enumerate() {
        for q in &ext[k + 1..] {
            let d = distance(p, q);
            if d > best.0 {
                best = (d, *p, *q);
            }
        }
    }
    best
}

pub fn extreme_diameter(polygon: &SphericalPolygon) -> f64 {
    extreme_diameter_pair(polygon).0
}

/// Regular triangle with the given side, centered on the north pole.
pub fn regular_triangle(side: f64) -> Result<SphericalPolygon> {
    let max = 2.0 * PI / 3.0;
    if !(side.is_finite() && side > 0.0 && side < max) {
        return Err(GeometryError::domain("side", side, 0.0, max));
    }
    // cos side = 1 - (3/2) sin^2 r for circumradius r.
    let r = (2.0 * (side / 2.0).sin() / 3f64.sqrt()).asin();
    let (sr, cr) = r.sin_cos();
    let vertices = (0..3)
        .map(|k| {
            let lon = 2.0 * PI * k as f64 / 3.0;
            SpherePoint::new(sr * lon.cos(), sr * lon.sin(), cr).expect("unit")
        })
        .collect();
    SphericalPolygon::with_center(vertices, SpherePoint::new(0.0, 0.0, 1.0).expect("unit"))
}

/// `extreme_diameter(P) - 2 phi(diam(P))`, defined when `diam(P)` lies in `(pi/2, pi)`.
pub fn theorem2_margin(polygon: &SphericalPolygon) -> Result<f64> {
    let diam = boundary_diameter(polygon).value;
    if !(diam > FRAC_PI_2 && diam < PI) {
        return Err(GeometryError::DiameterOutOfRange(diam));
    }
    Ok(extreme_diameter(polygon) - 2.0 * phi_unchecked(diam))
}
