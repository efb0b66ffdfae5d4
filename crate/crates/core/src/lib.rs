//! Convex geometry on the unit sphere S².
//!
//! The crate is organised bottom-up:
//!
//! - [`sphere`]: points, great circles, arcs, distances, perpendicular feet and vertex angles.
//! - [`quad`]: the half-side function [`quad::phi`] and the quadrilateral with three right
//!   angles (closed-form solver, geometric constructor, identity residuals).
//! - [`lune`]: lunes, their thickness, and the equilateral-triangle construction inside a lune.
//! - [`polygon`]: convex spherical polygons, hulls, extreme points and boundary diameters.
//! - [`verify`]: seeded, reproducible verification campaigns that tie everything together.
//!
//! Data-parallel loops go through [`par`], which is backed by rayon when the `parallel`
//! feature is enabled (the default) and by plain iterators otherwise.

pub mod error;
pub mod grid;
pub mod lune;
pub mod par;
pub mod polygon;
pub mod quad;
pub mod random;
pub mod sphere;
pub mod verify;

pub use error::{GeometryError, Result};
pub use lune::Lune;
pub use polygon::{Attainment, DiameterWitness, SphericalPolygon};
pub use quad::{QuadEmbedding, QuadSolution};
pub use sphere::{GeodesicArc, GreatCircle, Semicircle, SpherePoint};
