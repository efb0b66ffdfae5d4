//! Lunes and the equilateral triangle they contain.
//!
//! A lune `L = G ∩ H` is bounded by two semicircles: `G/H` (on the boundary of the
//! hemisphere `G`, centered at `g`) and `H/G` (centered at `h`). Its thickness is `|gh|`.
//! When the thickness `delta` lies in `(pi/2, pi)`, the two points `i, j` of `G/H` at
//! distance `phi(delta)` from `g` form, together with `h`, an equilateral triangle of side
//! `2 phi(delta)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::grid::unit_grid;
use crate::par::*;
use crate::quad::phi;
use crate::sphere::{
    antipode, distance, foot_of_perpendicular, GeodesicArc, GreatCircle, Semicircle, SpherePoint,
    EPS_ANTIPODE,
};

/// Parameter slack when deciding whether a point lies on the arc `ij`.
pub const ARC_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lune {
    /// Center of the hemisphere `G`.
    pub g_pole: SpherePoint,
    /// Center of the hemisphere `H`.
    pub h_pole: SpherePoint,
    /// Center `g` of the semicircle `G/H`.
    pub g_center: SpherePoint,
    /// Center `h` of the semicircle `H/G`.
    pub h_center: SpherePoint,
    pub corners: (SpherePoint, SpherePoint),
    pub thickness: f64,
}

impl Lune {
    /// The lune `G ∩ H` of the hemispheres centered at `g_pole` and `h_pole`.
    pub fn from_hemispheres(g_pole: SpherePoint, h_pole: SpherePoint) -> Result<Self> {
        let gv = *g_pole.vector();
        let hv = *h_pole.vector();
        let corner = SpherePoint::from_vector(gv.cross(&hv))
            .filter(|_| gv.cross(&hv).norm() > EPS_ANTIPODE)
            .ok_or(GeometryError::DegeneratePair)?;
        let gh = gv.dot(&hv);
        let g_center =
            SpherePoint::from_vector(hv - gv * gh).ok_or(GeometryError::DegeneratePair)?;
        let h_center =
            SpherePoint::from_vector(gv - hv * gh).ok_or(GeometryError::DegeneratePair)?;
        Ok(Lune {
            g_pole,
            h_pole,
            g_center,
            h_center,
            corners: (corner, antipode(&corner)),
            thickness: distance(&g_center, &h_center),
        })
    }

    pub fn circle_g(&self) -> GreatCircle {
        GreatCircle::from_normal(self.g_pole)
    }

    pub fn circle_h(&self) -> GreatCircle {
        GreatCircle::from_normal(self.h_pole)
    }

    /// The semicircle `G/H`.
    pub fn semicircle_g(&self) -> Semicircle {
        Semicircle::new(self.circle_g(), self.g_center).expect("g lies on the boundary of G")
    }

    /// The semicircle `H/G`.
    pub fn semicircle_h(&self) -> Semicircle {
        Semicircle::new(self.circle_h(), self.h_center).expect("h lies on the boundary of H")
    }

    /// Whether `p` belongs to the closed lune.
    pub fn contains(&self, p: &SpherePoint) -> bool {
        self.g_pole.dot(p) >= -crate::sphere::EPS_ON && self.h_pole.dot(p) >= -crate::sphere::EPS_ON
    }

    /// Point of `G/H` at signed arc length `s` from `g`, positive towards the first corner.
    pub fn point_on_g(&self, s: f64) -> SpherePoint {
        let g = self.g_center.vector();
        let c = self.corners.0.vector();
        SpherePoint::from_unit(g * s.cos() + c * s.sin())
    }

    fn require_wide(&self) -> Result<f64> {
        phi(self.thickness).map_err(|_| GeometryError::domain("thickness", self.thickness, FRAC_PI_2, PI))
    }
}

/// Canonical lune of thickness `delta`: corners at `(0, ±1, 0)`, `g` and `h` on the
/// x-z great circle, symmetric about `(1, 0, 0)`.
pub fn construct_lune(delta: f64) -> Result<Lune> {
    if !(delta.is_finite() && delta > 0.0 && delta < PI) {
        return Err(GeometryError::domain("delta", delta, 0.0, PI));
    }
    let (s, c) = (delta / 2.0).sin_cos();
    let g_pole = SpherePoint::new(s, 0.0, -c).expect("unit");
    let h_pole = SpherePoint::new(s, 0.0, c).expect("unit");
    Lune::from_hemispheres(g_pole, h_pole)
}

/// The points `i`, `j` of `G/H` at distance `phi(delta)` from `g`, on opposite sides of `g`.
pub fn proposition_points(lune: &Lune) -> Result<(SpherePoint, SpherePoint)> {
    let f = lune.require_wide()?;
    Ok((lune.point_on_g(f), lune.point_on_g(-f)))
}

/// For `k` on the arc `ij`, the point `k'` of `H/G` where the great circle through `k`
/// orthogonal to the boundary of `H` meets `H/G`.
pub fn perpendicular_foot_on_h(lune: &Lune, k: &SpherePoint) -> Result<SpherePoint> {
    let (i, j) = proposition_points(lune)?;
    let arc = GeodesicArc::new(i, j)?;
    if !arc.contains(k, ARC_SLACK) {
        return Err(GeometryError::NotOnArc);
    }
    let foot = foot_of_perpendicular(k, &lune.circle_h())?;
    // The nearest point of the circle lies on the far side; H/G carries the other one.
    if distance(&foot, &lune.h_center) <= FRAC_PI_2 {
        Ok(foot)
    } else {
        Ok(antipode(&foot))
    }
}

/// Smallest sampled distance `|kl|` with `k` on `ij` and `l` on `hk'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartIIIOutcome {
    pub min_distance: f64,
    pub bound: f64,
    pub k: SpherePoint,
    pub l: SpherePoint,
}

impl PartIIIOutcome {
    pub fn margin(&self) -> f64 {
        self.min_distance - self.bound
    }
}

/// Samples `samples_k` points `k` on the arc `ij` and `samples_l` points `l` on the arc
/// from `h` to `k'`, and returns the minimum of `|kl|`. Both grids include their endpoints.
pub fn check_part_iii(lune: &Lune, samples_k: usize, samples_l: usize) -> Result<PartIIIOutcome> {
    if samples_k < 2 || samples_l < 2 {
        return Err(GeometryError::Config("sample counts must be at least 2".into()));
    }
    let f = lune.require_wide()?;
    let (i, j) = proposition_points(lune)?;
    let ij = GeodesicArc::new(i, j)?;
    let ts = unit_grid(samples_l);
    let per_k: Vec<Result<(f64, SpherePoint, SpherePoint)>> = unit_grid(samples_k)
        .into_par_iter()
        .map(|s| {
            let k = ij.point_at_unchecked(s);
            let kp = perpendicular_foot_on_h(lune, &k)?;
            let hk = GeodesicArc::new(lune.h_center, kp)?;
            let mut best = (f64::INFINITY, k, k);
            for &t in &ts {
                let l = hk.point_at_unchecked(t);
                let d = distance(&k, &l);
                if d < best.0 {
                    best = (d, k, l);
                }
            }
            Ok(best)
        })
        .collect();
    let mut best: Option<(f64, SpherePoint, SpherePoint)> = None;
    for r in per_k {
        let r = r?;
        if best.is_none_or(|b| r.0 < b.0) {
            best = Some(r);
        }
    }
    let (min_distance, k, l) = best.expect("at least two samples");
    Ok(PartIIIOutcome { min_distance, bound: 2.0 * f, k, l })
}

/// Minimum of `|kh|` over `samples` points `k` of the arc `ij` (endpoints included).
pub fn min_distance_ij_to_h(lune: &Lune, samples: usize) -> Result<f64> {
    let (i, j) = proposition_points(lune)?;
    let ij = GeodesicArc::new(i, j)?;
    Ok(unit_grid(samples)
        .into_iter()
        .map(|t| distance(&ij.point_at_unchecked(t), &lune.h_center))
        .fold(f64::INFINITY, f64::min))
}
