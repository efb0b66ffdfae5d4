//! The half-side function `phi` and the spherical quadrilateral with three right angles.
//!
//! For a quadrilateral `abcd` with right angles at `a`, `b` and `c`, write
//! `kappa = |ab|`, `lambda = |bc|`, `mu = |cd|`, `nu = |da|` and `xi = |bd|`. Then
//!
//! ```text
//! sin mu = sin kappa cos nu
//! tan mu = tan kappa cos lambda
//! cos nu = sqrt(cos^2 mu cos^2 lambda + sin^2 mu)
//! cos nu = cos lambda / sqrt(1 - sin^2 lambda sin^2 kappa)
//! ```
//!
//! and the diagonal satisfies `cos xi = cos mu cos lambda = cos nu cos kappa`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::sphere::{angle_at, distance, SpherePoint};

/// Smallest accepted side length for the quadrilateral solver and constructor.
pub const MIN_SIDE: f64 = 1e-8;

fn check_open(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value > lo && value < hi {
        Ok(())
    } else {
        Err(GeometryError::domain(name, value, lo, hi))
    }
}

/// `phi(delta) = arccos((cos delta + sqrt(cos^2 delta + 8)) / 4)` for `delta` in `(pi/2, pi)`.
///
/// Strictly increasing, with values in `(pi/4, pi/3)`. For a lune of thickness `delta`,
/// `2 phi(delta)` is the side of the equilateral triangle with one vertex at a semicircle
/// center and the other two symmetric on the opposite semicircle.
pub fn phi(delta: f64) -> Result<f64> {
    check_open("delta", delta, FRAC_PI_2, PI)?;
    Ok(phi_unchecked(delta))
}

pub(crate) fn phi_unchecked(delta: f64) -> f64 {
    let c = delta.cos();
    ((c + (c * c + 8.0).sqrt()) / 4.0).acos()
}

/// Inverse of [`phi`]: the `delta` with `cos delta = (2 cos^2 phi - 1) / cos phi`.
///
/// `sin delta` is evaluated in factored form so the result stays accurate as `delta`
/// approaches pi (where `cos delta` alone is ill-conditioned).
pub fn phi_inverse_delta(phi_val: f64) -> Result<f64> {
    check_open("phi", phi_val, FRAC_PI_4, FRAC_PI_3)?;
    let c = phi_val.cos();
    let cos_delta = (2.0 * c * c - 1.0) / c;
    // 2c - 1 = 2(cos phi - cos pi/3), 2c^2 - 1 = cos 2phi, both via sine products.
    let two_c_minus_1 = -4.0 * ((phi_val + FRAC_PI_3) / 2.0).sin() * ((phi_val - FRAC_PI_3) / 2.0).sin();
    let one_minus_c = 2.0 * (phi_val / 2.0).sin().powi(2);
    let sin_delta = ((1.0 + 2.0 * c) * one_minus_c * two_c_minus_1 * (1.0 + c)).sqrt() / c;
    Ok(sin_delta.atan2(cos_delta))
}

/// Side lengths of a quadrilateral with right angles at `a`, `b`, `c`, plus the diagonal `|bd|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadSolution {
    pub kappa: f64,
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub xi: f64,
}

impl QuadSolution {
    /// `max(|cos xi - cos mu cos lambda|, |cos xi - cos nu cos kappa|)`.
    pub fn diagonal_residual(&self) -> f64 {
        let c = self.xi.cos();
        let r1 = (c - self.mu.cos() * self.lambda.cos()).abs();
        let r2 = (c - self.nu.cos() * self.kappa.cos()).abs();
        r1.max(r2)
    }

    /// Largest absolute difference in `(mu, nu, xi)` against another solution.
    pub fn max_side_difference(&self, other: &QuadSolution) -> f64 {
        [
            (self.mu - other.mu).abs(),
            (self.nu - other.nu).abs(),
            (self.xi - other.xi).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Closed-form solution from the two sides adjacent to `b`.
///
/// `mu` follows from the tangent relation and `nu` from the last one; both are evaluated
/// as `atan2` of the numerator and denominator of the respective tangent, which leaves the
/// other two relations as independent checks.
pub fn solve_quad(kappa: f64, lambda: f64) -> Result<QuadSolution> {
    check_open("kappa", kappa, MIN_SIDE, FRAC_PI_2)?;
    check_open("lambda", lambda, MIN_SIDE, FRAC_PI_2)?;
    let (sk, ck) = kappa.sin_cos();
    let (sl, cl) = lambda.sin_cos();
    let mu = (sk * cl).atan2(ck);
    // cos nu = cl / sqrt(1 - sl^2 sk^2) and sqrt(1 - sl^2 sk^2) = hypot(cl, sl ck).
    let nu = (sl * ck).atan2(cl);
    let (sm, cm) = mu.sin_cos();
    let xi = (sm * sm + cm * cm * sl * sl).sqrt().atan2(cm * cl);
    Ok(QuadSolution { kappa, lambda, mu, nu, xi })
}

/// Residuals of the four side relations, in the order listed in the module docs.
pub fn check_identities(q: &QuadSolution) -> [f64; 4] {
    let (sk, _) = q.kappa.sin_cos();
    let (sl, cl) = q.lambda.sin_cos();
    let (sm, cm) = q.mu.sin_cos();
    let cn = q.nu.cos();
    [
        (sm - sk * cn).abs(),
        (q.mu.tan() - q.kappa.tan() * cl).abs(),
        (cn - (cm * cm * cl * cl + sm * sm).sqrt()).abs(),
        (cn - cl / (1.0 - sl * sl * sk * sk).sqrt()).abs(),
    ]
}

/// Vertices of a realized quadrilateral with right angles at `a`, `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadEmbedding {
    pub a: SpherePoint,
    pub b: SpherePoint,
    pub c: SpherePoint,
    pub d: SpherePoint,
}

impl QuadEmbedding {
    /// Measures all sides and the diagonal `bd` on the embedding.
    pub fn measure(&self) -> QuadSolution {
        QuadSolution {
            kappa: distance(&self.a, &self.b),
            lambda: distance(&self.b, &self.c),
            mu: distance(&self.c, &self.d),
            nu: distance(&self.d, &self.a),
            xi: distance(&self.b, &self.d),
        }
    }

    /// Interior angles at `a`, `b`, `c`, `d`.
    pub fn angles(&self) -> Result<[f64; 4]> {
        let QuadEmbedding { a, b, c, d } = self;
        Ok([
            angle_at(a, d, b)?,
            angle_at(b, a, c)?,
            angle_at(c, b, d)?,
            angle_at(d, c, a)?,
        ])
    }
}

/// Builds the quadrilateral geometrically.
///
/// `b = (1, 0, 0)`, `c` on the equator at longitude `lambda`, `a` on the meridian of `b`
/// at latitude `kappa`. The perpendicular to `ba` at `a` and the perpendicular to `bc` at
/// `c` both pass through the pole of the respective arc's circle, so their great circles
/// have normals `a x (0,1,0)` and `c x (0,0,1)`; `d` is their intersection in the open
/// positive octant. Extending `cd` and `ba` meets at the north pole, a quarter turn from
/// both `b` and `c`.
pub fn construct_quad(kappa: f64, lambda: f64) -> Result<QuadEmbedding> {
    use crate::sphere::Vec3;
    check_open("kappa", kappa, MIN_SIDE, FRAC_PI_2)?;
    check_open("lambda", lambda, MIN_SIDE, FRAC_PI_2)?;
    let (sk, ck) = kappa.sin_cos();
    let (sl, cl) = lambda.sin_cos();
    let b = Vec3::new(1.0, 0.0, 0.0);
    let a = Vec3::new(ck, 0.0, sk);
    let c = Vec3::new(cl, sl, 0.0);
    let perp_a = a.cross(&Vec3::y());
    let perp_c = c.cross(&Vec3::z());
    let d = perp_a.cross(&perp_c);
    if d.norm() < MIN_SIDE || d.iter().any(|&x| x <= 0.0) {
        return Err(GeometryError::NoIntersection);
    }
    let d = SpherePoint::from_vector(d).ok_or(GeometryError::NoIntersection)?;
    Ok(QuadEmbedding {
        a: SpherePoint::from_unit(a),
        b: SpherePoint::from_unit(b),
        c: SpherePoint::from_unit(c),
        d,
    })
}
