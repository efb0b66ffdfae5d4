//! Points, great circles and geodesic arcs on the unit sphere.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Vector3;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GeometryError, Result};

/// Tolerance for unit-norm validation.
pub const EPS_UNIT: f64 = 1e-12;
/// Tolerance for incidence tests (point on a great circle).
pub const EPS_ON: f64 = 1e-10;
/// Tolerance used to reject equal, antipodal and polar configurations.
pub const EPS_ANTIPODE: f64 = 1e-9;

pub type Vec3 = Vector3<f64>;

/// A point of S², stored as a unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    /// Builds a point from any non-zero vector, re-normalizing it.
    ///
    /// Returns `None` for the zero vector or non-finite input.
    pub fn new(x: f64, y: f64, z: f64) -> Option<Self> {
        Self::from_vector(Vec3::new(x, y, z))
    }

    pub fn from_vector(v: Vec3) -> Option<Self> {
        let n = v.norm();
        if !n.is_finite() || n <= f64::MIN_POSITIVE {
            return None;
        }
        Some(SpherePoint(v / n))
    }

    /// Wraps a vector the caller guarantees to be (numerically) unit length.
    pub(crate) fn from_unit(v: Vec3) -> Self {
        debug_assert!((v.norm() - 1.0).abs() < 1e-9, "not unit: {}", v.norm());
        SpherePoint(v / v.norm())
    }

    /// Longitude/latitude in degrees.
    pub fn from_lon_lat_deg(lon_deg: f64, lat_deg: f64) -> Self {
        let (lon, lat) = (lon_deg.to_radians(), lat_deg.to_radians());
        SpherePoint(Vec3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()))
    }

    pub fn to_lon_lat_deg(&self) -> (f64, f64) {
        let v = self.0;
        let lon = v.y.atan2(v.x).to_degrees();
        let lat = v.z.atan2(v.x.hypot(v.y)).to_degrees();
        (lon, lat)
    }

    pub fn vector(&self) -> &Vec3 {
        &self.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn is_unit(&self) -> bool {
        (self.0.norm() - 1.0).abs() <= EPS_UNIT
    }

    /// Rotates the point by a rotation matrix.
    pub fn rotated(&self, rotation: &nalgebra::Rotation3<f64>) -> SpherePoint {
        SpherePoint::from_unit(rotation * self.0)
    }
}

impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

/// Accepted wire forms: `[x, y, z]` or `{"lon_deg": .., "lat_deg": ..}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Xyz([f64; 3]),
    LonLat { lon_deg: f64, lat_deg: f64 },
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match PointRepr::deserialize(deserializer)? {
            PointRepr::Xyz([x, y, z]) => SpherePoint::new(x, y, z)
                .ok_or_else(|| serde::de::Error::custom("point must be a non-zero finite vector")),
            PointRepr::LonLat { lon_deg, lat_deg } => {
                Ok(SpherePoint::from_lon_lat_deg(lon_deg, lat_deg))
            }
        }
    }
}

/// Spherical distance, in `[0, pi]`.
///
/// Uses `atan2(|p x q|, <p, q>)`, which keeps full precision near 0 and pi.
pub fn distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    p.0.cross(&q.0).norm().atan2(p.0.dot(&q.0))
}

pub fn antipode(p: &SpherePoint) -> SpherePoint {
    SpherePoint(-p.0)
}

/// A great circle, given by the unit normal of its plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreatCircle {
    normal: SpherePoint,
}

impl GreatCircle {
    pub fn from_normal(normal: SpherePoint) -> Self {
        GreatCircle { normal }
    }

    pub fn normal(&self) -> &SpherePoint {
        &self.normal
    }

    /// Sine of the distance from `p` to the circle, signed by side.
    pub fn signed_offset(&self, p: &SpherePoint) -> f64 {
        self.normal.dot(p)
    }

    pub fn contains(&self, p: &SpherePoint) -> bool {
        self.signed_offset(p).abs() <= EPS_ON
    }

    /// The two points of the circle at distance pi/2 from every point of `self` and `other`,
    /// i.e. the intersection of the two circles (`None` when the circles coincide).
    pub fn intersection(&self, other: &GreatCircle) -> Option<(SpherePoint, SpherePoint)> {
        let v = self.normal.0.cross(&other.normal.0);
        if v.norm() < EPS_ANTIPODE {
            return None;
        }
        let p = SpherePoint::from_vector(v)?;
        Some((p, antipode(&p)))
    }
}

pub fn great_circle_through(p: &SpherePoint, q: &SpherePoint) -> Result<GreatCircle> {
    let d = distance(p, q);
    if d <= EPS_ANTIPODE || d >= PI - EPS_ANTIPODE {
        return Err(GeometryError::DegeneratePair);
    }
    let n = SpherePoint::from_vector(p.0.cross(&q.0)).ok_or(GeometryError::DegeneratePair)?;
    Ok(GreatCircle { normal: n })
}

/// The shorter geodesic segment between two non-antipodal points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicArc {
    a: SpherePoint,
    b: SpherePoint,
    length: f64,
}

impl GeodesicArc {
    pub fn new(a: SpherePoint, b: SpherePoint) -> Result<Self> {
        let length = distance(&a, &b);
        if length >= PI - EPS_ANTIPODE {
            return Err(GeometryError::DegeneratePair);
        }
        Ok(GeodesicArc { a, b, length })
    }

    pub fn start(&self) -> &SpherePoint {
        &self.a
    }

    pub fn end(&self) -> &SpherePoint {
        &self.b
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Unit tangent at `a` pointing towards `b`, or `None` for a zero-length arc.
    fn tangent(&self) -> Option<Vec3> {
        let t = self.b.0 - self.a.0 * self.a.0.dot(&self.b.0);
        let n = t.norm();
        (n > 0.0).then(|| t / n)
    }

    /// Point at fraction `t` of the arc, with `distance(a, point) = t * length`.
    pub fn point_at(&self, t: f64) -> Result<SpherePoint> {
        if !(0.0..=1.0).contains(&t) {
            return Err(GeometryError::ParameterOutOfRange(t));
        }
        Ok(self.point_at_unchecked(t))
    }

    pub(crate) fn point_at_unchecked(&self, t: f64) -> SpherePoint {
        if t == 1.0 {
            return self.b;
        }
        match self.tangent() {
            Some(u) => {
                let s = t * self.length;
                SpherePoint::from_unit(self.a.0 * s.cos() + u * s.sin())
            }
            None => self.a,
        }
    }

    pub fn midpoint(&self) -> SpherePoint {
        self.point_at_unchecked(0.5)
    }

    /// Whether `p` lies on this arc: on its great circle within [`EPS_ON`] and between the
    /// endpoints, with `slack` allowed on the endpoint orientation tests.
    pub fn contains(&self, p: &SpherePoint, slack: f64) -> bool {
        let Some(u) = self.tangent() else {
            return distance(&self.a, p) <= slack.max(EPS_ON);
        };
        let n = self.a.0.cross(&u);
        if n.dot(&p.0).abs() > EPS_ON {
            return false;
        }
        self.a.0.cross(&p.0).dot(&n) >= -slack && p.0.cross(&self.b.0).dot(&n) >= -slack
    }
}

/// Free-function form of [`GeodesicArc::point_at`].
pub fn arc_point(arc: &GeodesicArc, t: f64) -> Result<SpherePoint> {
    arc.point_at(t)
}

/// Half of a great circle: the points at distance at most pi/2 from `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Semicircle {
    circle: GreatCircle,
    center: SpherePoint,
}

impl Semicircle {
    pub fn new(circle: GreatCircle, center: SpherePoint) -> Result<Self> {
        if !circle.contains(&center) {
            return Err(GeometryError::NotOnArc);
        }
        Ok(Semicircle { circle, center })
    }

    pub fn circle(&self) -> &GreatCircle {
        &self.circle
    }

    pub fn center(&self) -> &SpherePoint {
        &self.center
    }

    /// The two endpoints, each at distance pi/2 from the center.
    pub fn endpoints(&self) -> (SpherePoint, SpherePoint) {
        let e = SpherePoint::from_unit(self.circle.normal.0.cross(&self.center.0));
        (e, antipode(&e))
    }

    pub fn contains(&self, p: &SpherePoint) -> bool {
        self.circle.contains(p) && distance(&self.center, p) <= FRAC_PI_2 + EPS_ON
    }
}

/// The point of `circle` nearest to `p`.
///
/// The great circle through `p` and the result is orthogonal to `circle`; the farthest
/// point of `circle` from `p` is the antipode of the result.
pub fn foot_of_perpendicular(p: &SpherePoint, circle: &GreatCircle) -> Result<SpherePoint> {
    let n = circle.normal.0;
    let h = p.0.dot(&n);
    if h.abs() >= 1.0 - EPS_ANTIPODE {
        return Err(GeometryError::PoleDegenerate);
    }
    SpherePoint::from_vector(p.0 - n * h).ok_or(GeometryError::PoleDegenerate)
}

/// Unit tangent at `vertex` of the geodesic towards `p`.
fn tangent_towards(vertex: &SpherePoint, p: &SpherePoint) -> Result<Vec3> {
    let d = distance(vertex, p);
    if d <= EPS_ANTIPODE || d >= PI - EPS_ANTIPODE {
        return Err(GeometryError::DegeneratePair);
    }
    let v = vertex.0;
    let t = p.0 - v * v.dot(&p.0);
    Ok(t / t.norm())
}

/// Angle in `[0, pi]` at `vertex` between the geodesics towards `p` and towards `q`.
pub fn angle_at(vertex: &SpherePoint, p: &SpherePoint, q: &SpherePoint) -> Result<f64> {
    let tp = tangent_towards(vertex, p)?;
    let tq = tangent_towards(vertex, q)?;
    Ok(tp.cross(&tq).norm().atan2(tp.dot(&tq)))
}

/// Orientation of the triple as seen from outside the sphere: positive when `a, b, c`
/// turn counterclockwise.
pub fn orientation(a: &SpherePoint, b: &SpherePoint, c: &SpherePoint) -> f64 {
    a.0.cross(&b.0).dot(&c.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn p(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::new(x, y, z).unwrap()
    }

    #[test]
    fn distance_basic_cases() {
        let a = p(0.3, -0.2, 0.9);
        assert_eq!(distance(&a, &a), 0.0);
        assert_abs_diff_eq!(distance(&p(1., 0., 0.), &p(0., 1., 0.)), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(distance(&a, &antipode(&a)), PI, epsilon = 1e-15);
    }

    #[test]
    fn distance_is_accurate_for_tiny_angles() {
        let a = p(1., 0., 0.);
        let b = p(1., 1e-9, 0.);
        assert_abs_diff_eq!(distance(&a, &b), 1e-9, epsilon = 1e-22);
    }

    #[test]
    fn antipode_is_involution() {
        let a = p(0., 0., 1.);
        assert_eq!(antipode(&a).to_array(), [0., 0., -1.]);
        let b = p(0.1, 0.7, -0.3);
        assert_eq!(antipode(&antipode(&b)), b);
    }

    #[test]
    fn constructor_renormalizes() {
        let a = p(3., 4., 0.);
        assert!(a.is_unit());
        assert_abs_diff_eq!(a.x(), 0.6, epsilon = 1e-15);
        assert!(SpherePoint::new(0., 0., 0.).is_none());
        assert!(SpherePoint::new(f64::NAN, 0., 1.).is_none());
    }

    #[test]
    fn great_circle_of_axes() {
        let c = great_circle_through(&p(1., 0., 0.), &p(0., 1., 0.)).unwrap();
        assert_eq!(c.normal().to_array(), [0., 0., 1.]);
        let a = p(0.2, 0.1, 0.4);
        assert_eq!(great_circle_through(&a, &a), Err(GeometryError::DegeneratePair));
        assert_eq!(
            great_circle_through(&a, &antipode(&a)),
            Err(GeometryError::DegeneratePair)
        );
    }

    #[test]
    fn arc_endpoints_and_midpoint() {
        let arc = GeodesicArc::new(p(1., 0., 0.), p(0., 0.6, 0.8)).unwrap();
        assert_eq!(arc.point_at(0.0).unwrap(), *arc.start());
        assert_eq!(arc.point_at(1.0).unwrap(), *arc.end());
        let m = arc.midpoint();
        assert_abs_diff_eq!(distance(arc.start(), &m), arc.length() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(distance(&m, arc.end()), arc.length() / 2.0, epsilon = 1e-15);
        assert_eq!(arc.point_at(1.5), Err(GeometryError::ParameterOutOfRange(1.5)));
        assert_eq!(arc.point_at(-0.1), Err(GeometryError::ParameterOutOfRange(-0.1)));
    }

    #[test]
    fn quarter_equator_quarter_point() {
        // Closed form: the point at t of an equatorial arc from lon 0 is at lon t * length.
        let arc = GeodesicArc::new(p(1., 0., 0.), p(0., 1., 0.)).unwrap();
        let q = arc.point_at(0.25).unwrap();
        let lon = FRAC_PI_2 * 0.25;
        assert_abs_diff_eq!(q.x(), lon.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(q.y(), lon.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(q.z(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn antipodal_arc_rejected() {
        let a = p(0., 0., 1.);
        assert!(GeodesicArc::new(a, antipode(&a)).is_err());
    }

    #[test]
    fn foot_on_circle_and_pole() {
        let equator = GreatCircle::from_normal(p(0., 0., 1.));
        let on = p(0.6, 0.8, 0.);
        assert_eq!(foot_of_perpendicular(&on, &equator).unwrap(), on);
        let near_pole = p(1e-12, 0., 1.);
        assert_eq!(
            foot_of_perpendicular(&near_pole, &equator),
            Err(GeometryError::PoleDegenerate)
        );
    }

    #[test]
    fn foot_minimizes_over_dense_samples() {
        let equator = GreatCircle::from_normal(p(0., 0., 1.));
        let q = p(0.3, -0.5, 0.7);
        let f = foot_of_perpendicular(&q, &equator).unwrap();
        assert_eq!(f.z(), 0.0);
        let df = distance(&q, &f);
        let n = 100_000;
        let mut best = f64::INFINITY;
        let mut worst = 0.0_f64;
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            let x = p(t.cos(), t.sin(), 0.);
            let d = distance(&q, &x);
            best = best.min(d);
            worst = worst.max(d);
        }
        assert!(df <= best + 1e-15);
        assert!(best - df < 1e-8);
        assert_abs_diff_eq!(distance(&q, &antipode(&f)), worst, epsilon = 1e-8);
    }

    #[test]
    fn octant_angles() {
        let (x, y, z) = (p(1., 0., 0.), p(0., 1., 0.), p(0., 0., 1.));
        for (v, a, b) in [(x, y, z), (y, z, x), (z, x, y)] {
            assert_abs_diff_eq!(angle_at(&v, &a, &b).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        }
    }

    #[test]
    fn angle_zero_along_extension() {
        let v = p(1., 0., 0.);
        let a = p(1., 0.3, 0.);
        let b = p(1., 0.9, 0.);
        assert_abs_diff_eq!(angle_at(&v, &a, &b).unwrap(), 0.0, epsilon = 1e-15);
        assert_eq!(angle_at(&v, &v, &b), Err(GeometryError::DegeneratePair));
    }

    #[test]
    fn angle_of_diagonal() {
        let v = p(0., 0., 1.);
        let a = p(1., 0., 0.);
        let b = p(1., 1., 0.);
        assert_abs_diff_eq!(angle_at(&v, &a, &b).unwrap(), FRAC_PI_4, epsilon = 1e-15);
    }

    #[test]
    fn lon_lat_round_trip() {
        let a = SpherePoint::from_lon_lat_deg(-37.5, 12.25);
        let (lon, lat) = a.to_lon_lat_deg();
        assert_abs_diff_eq!(lon, -37.5, epsilon = 1e-12);
        assert_abs_diff_eq!(lat, 12.25, epsilon = 1e-12);
    }

    #[test]
    fn json_forms() {
        let a: SpherePoint = serde_json::from_str("[0, 0, 2]").unwrap();
        assert_eq!(a.to_array(), [0., 0., 1.]);
        let b: SpherePoint = serde_json::from_str(r#"{"lon_deg": 90, "lat_deg": 0}"#).unwrap();
        assert_abs_diff_eq!(b.y(), 1.0, epsilon = 1e-15);
        assert!(serde_json::from_str::<SpherePoint>("[0, 0, 0]").is_err());
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0.0,0.0,1.0]");
    }

    #[test]
    fn semicircle_endpoints() {
        let c = GreatCircle::from_normal(p(0., 0., 1.));
        let s = Semicircle::new(c, p(1., 0., 0.)).unwrap();
        let (e1, e2) = s.endpoints();
        assert_abs_diff_eq!(distance(&e1, s.center()), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(distance(&e2, s.center()), FRAC_PI_2, epsilon = 1e-15);
        assert!(s.contains(&p(1., 1., 0.)));
        assert!(!s.contains(&p(-1., 0.1, 0.)));
        assert!(Semicircle::new(c, p(0., 0., 1.)).is_err());
    }

    #[test]
    fn arc_contains() {
        let arc = GeodesicArc::new(p(1., 0., 0.), p(0., 1., 0.)).unwrap();
        assert!(arc.contains(&p(1., 1., 0.), 0.0));
        assert!(!arc.contains(&p(1., -1., 0.), 1e-12));
        assert!(!arc.contains(&p(1., 1., 0.1), 1e-12));
    }
}
