//! Seeded random points and polygons.
//!
//! Every trial draws from its own ChaCha8 stream: the generator is seeded with the
//! campaign seed via `seed_from_u64` and the stream id is set to the trial index. A trial
//! is therefore a pure function of `(seed, index)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::polygon::{boundary_diameter, convex_hull, SphericalPolygon};
use crate::sphere::{SpherePoint, Vec3};

pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn uniform_point<R: Rng + ?Sized>(rng: &mut R) -> SpherePoint {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let lon: f64 = rng.random_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    SpherePoint::new(r * lon.cos(), r * lon.sin(), z).expect("unit")
}

/// Uniform (area measure) point in the cap of angular `radius` around `center`.
pub fn uniform_in_cap<R: Rng + ?Sized>(rng: &mut R, center: &SpherePoint, radius: f64) -> SpherePoint {
    let c = center.vector();
    let helper = if c.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (helper - c * c.dot(&helper)).normalize();
    let e2 = c.cross(&e1);
    let cos_t: f64 = rng.random_range(radius.cos()..=1.0);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    let az: f64 = rng.random_range(0.0..2.0 * PI);
    SpherePoint::from_vector(c * cos_t + (e1 * az.cos() + e2 * az.sin()) * sin_t).expect("unit")
}

/// Recipe for random convex polygons: hull of `points` uniform draws in a random cap,
/// rejected unless the diameter falls in `diameter`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolygonRecipe {
    pub points: (usize, usize),
    pub cap_radius: (f64, f64),
    /// Accepted diameters, `lo < d <= hi` when `hi_inclusive`, otherwise `lo < d < hi`.
    pub diameter: (f64, f64),
    pub hi_inclusive: bool,
    pub max_attempts: usize,
}

impl PolygonRecipe {
    /// Bodies with diameter in `(pi/2 + 1e-4, pi - 1e-4)`.
    pub fn wide() -> Self {
        PolygonRecipe {
            points: (5, 50),
            cap_radius: (FRAC_PI_4 + 0.05, FRAC_PI_2 - 0.05),
            diameter: (FRAC_PI_2 + 1e-4, PI - 1e-4),
            hi_inclusive: false,
            max_attempts: 10_000,
        }
    }

    /// Bodies with diameter at most pi/2.
    pub fn narrow() -> Self {
        PolygonRecipe {
            points: (5, 50),
            cap_radius: (0.05, FRAC_PI_4),
            diameter: (0.0, FRAC_PI_2),
            hi_inclusive: true,
            max_attempts: 10_000,
        }
    }

    fn accepts(&self, d: f64) -> bool {
        d > self.diameter.0 && if self.hi_inclusive { d <= self.diameter.1 } else { d < self.diameter.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomPolygon {
    pub polygon: SphericalPolygon,
    pub diameter: f64,
    pub attempts: usize,
}

pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R, recipe: &PolygonRecipe) -> Result<RandomPolygon> {
    for attempt in 1..=recipe.max_attempts {
        let n = rng.random_range(recipe.points.0..=recipe.points.1);
        let radius = rng.random_range(recipe.cap_radius.0..recipe.cap_radius.1);
        let center = uniform_point(rng);
        let pts: Vec<SpherePoint> = (0..n).map(|_| uniform_in_cap(rng, &center, radius)).collect();
        let Ok(polygon) = convex_hull(&pts) else { continue };
        let diameter = boundary_diameter(&polygon).value;
        if recipe.accepts(diameter) {
            return Ok(RandomPolygon { polygon, diameter, attempts: attempt });
        }
    }
    Err(GeometryError::Config(format!(
        "no polygon with diameter in {:?} after {} attempts",
        recipe.diameter, recipe.max_attempts
    )))
}

/// The polygon of trial `index` under `seed`.
pub fn trial_polygon(seed: u64, index: u64, recipe: &PolygonRecipe) -> Result<RandomPolygon> {
    random_polygon(&mut trial_rng(seed, index), recipe)
}
