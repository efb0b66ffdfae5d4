//! Reproducible verification campaigns.
//!
//! A campaign evaluates every statement the library encodes (the half-side function, the
//! three-right-angle quadrilateral, the lune construction and the extreme-point diameter
//! bound) over deterministic grids and seeded random polygons, and reports the worst
//! margin of each check together with a payload that reproduces it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{GeometryError, Result};
use crate::grid::{open_grid, unit_grid};
use crate::lune::{check_part_iii, construct_lune, proposition_points};
use crate::par::*;
use crate::polygon::{boundary_diameter, extreme_diameter, regular_triangle, Attainment, SphericalPolygon};
use crate::quad::{check_identities, construct_quad, phi, phi_inverse_delta, solve_quad};
use crate::random::{trial_polygon, PolygonRecipe};
use crate::sphere::{distance, GeodesicArc};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl DeltaGrid {
    /// Interior points of `(min, max)`.
    pub fn points(&self) -> Vec<f64> {
        open_grid(self.min, self.max, self.steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    /// Random polygons with diameter in `(pi/2, pi)`.
    pub trials: usize,
    /// Grid for the half-side function checks.
    pub delta_grid: DeltaGrid,
    pub tolerance: f64,
    pub output_format: OutputFormat,
    /// Number of lune thicknesses in `(pi/2 + 0.01, pi - 0.01)`.
    pub lune_steps: usize,
    /// Samples per arc for the lune distance bound.
    pub lune_samples: usize,
    /// Side count per axis of the quadrilateral grid over `(0.05, pi/2 - 0.05)^2`.
    pub quad_steps: usize,
    /// Random polygons with diameter at most pi/2.
    pub narrow_trials: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            delta_grid: DeltaGrid { min: FRAC_PI_2 + 1e-6, max: PI - 1e-6, steps: 1000 },
            tolerance: DEFAULT_TOLERANCE,
            output_format: OutputFormat::Text,
            lune_steps: 50,
            lune_samples: 200,
            quad_steps: 20,
            narrow_trials: 1000,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        let err = |m: &str| Err(GeometryError::Config(m.into()));
        if self.trials < 1 {
            return err("trials must be at least 1");
        }
        if self.delta_grid.steps < 2 {
            return err("delta grid needs at least 2 steps");
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return err("tolerance must be positive");
        }
        let DeltaGrid { min, max, .. } = self.delta_grid;
        if !(min > FRAC_PI_2 && max < PI && min < max) {
            return err("delta grid must lie inside (pi/2, pi)");
        }
        if self.lune_steps < 1 || self.quad_steps < 1 {
            return err("lune and quadrilateral grids need at least 1 step");
        }
        if self.lune_samples < 2 {
            return err("lune samples must be at least 2");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub instances: usize,
    pub min_margin: f64,
    pub worst_case_payload: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub schema_version: u32,
    pub config: CampaignConfig,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl CampaignReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Builds a record from per-instance margins; the payload is produced for the worst one.
fn record(name: &str, margins: &[f64], tolerance: f64, payload: impl Fn(usize) -> Value) -> CheckRecord {
    let mut worst: Option<usize> = None;
    for (k, &m) in margins.iter().enumerate() {
        match worst {
            Some(w) if !(m < margins[w] || (m.is_nan() && !margins[w].is_nan())) => {}
            _ => worst = Some(k),
        }
    }
    let (min_margin, worst_case_payload) = match worst {
        Some(w) => (margins[w], payload(w)),
        None => (f64::NAN, Value::Null),
    };
    CheckRecord {
        name: name.to_string(),
        instances: margins.len(),
        min_margin,
        worst_case_payload,
        pass: min_margin >= -tolerance,
    }
}

/// One random polygon of the diameter-bound campaign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Trial {
    pub index: u64,
    pub diameter: f64,
    pub attainment: Attainment,
    pub extreme_diameter: f64,
    pub bound: f64,
    pub margin: f64,
    pub ratio: f64,
    pub polygon: SphericalPolygon,
}

/// Evaluates trial `index`: a random polygon with diameter in `(pi/2, pi)` and its margin
/// `extreme_diameter - 2 phi(diameter)`.
pub fn theorem2_trial(seed: u64, index: u64) -> Result<Theorem2Trial> {
    let rp = trial_polygon(seed, index, &PolygonRecipe::wide())?;
    let witness = boundary_diameter(&rp.polygon);
    let ext = extreme_diameter(&rp.polygon);
    let bound = 2.0 * phi(witness.value)?;
    Ok(Theorem2Trial {
        index,
        diameter: witness.value,
        attainment: witness.attainment,
        extreme_diameter: ext,
        bound,
        margin: ext - bound,
        ratio: ext / witness.value,
        polygon: rp.polygon,
    })
}

/// All trials `0..trials`, in index order.
pub fn theorem2_trials(seed: u64, trials: usize) -> Result<Vec<Theorem2Trial>> {
    (0..trials as u64)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| theorem2_trial(seed, k))
        .collect()
}

/// A random polygon with diameter at most pi/2 and the gap between its two diameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NarrowTrial {
    pub index: u64,
    pub diameter: f64,
    pub extreme_diameter: f64,
    pub polygon: SphericalPolygon,
}

/// Substream offset separating narrow trials from wide ones under the same seed.
pub const NARROW_STREAM_OFFSET: u64 = 1 << 40;

pub fn narrow_trial(seed: u64, index: u64) -> Result<NarrowTrial> {
    let rp = trial_polygon(seed, NARROW_STREAM_OFFSET + index, &PolygonRecipe::narrow())?;
    Ok(NarrowTrial {
        index,
        diameter: rp.diameter,
        extreme_diameter: extreme_diameter(&rp.polygon),
        polygon: rp.polygon,
    })
}

fn polygon_payload(seed: u64, index: u64, stream: u64, poly: &SphericalPolygon) -> Value {
    json!({ "seed": seed, "index": index, "stream": stream, "vertices": poly.vertices() })
}

fn lemma_checks(cfg: &CampaignConfig) -> Result<Vec<CheckRecord>> {
    let grid = cfg.delta_grid.points();
    let phis = grid.iter().map(|&d| phi(d)).collect::<Result<Vec<_>>>()?;
    let tol = cfg.tolerance;

    let steps: Vec<f64> = phis.windows(2).map(|w| w[1] - w[0]).collect();
    let mono = record("lemma_monotonic", &steps, tol, |k| {
        json!({ "delta_lo": grid[k], "delta_hi": grid[k + 1] })
    });

    let range: Vec<f64> = phis.iter().map(|&f| (f - FRAC_PI_4).min(FRAC_PI_3 - f)).collect();
    let range = record("lemma_range", &range, tol, |k| json!({ "delta": grid[k], "phi": phis[k] }));

    let inverse: Vec<f64> = grid
        .iter()
        .zip(&phis)
        .map(|(&d, &f)| phi_inverse_delta(f).map(|back| -(back - d).abs()))
        .collect::<Result<_>>()?;
    let inverse = record("lemma_inverse_round_trip", &inverse, tol, |k| json!({ "delta": grid[k] }));

    let claim: Vec<f64> = grid.iter().zip(&phis).map(|(&d, &f)| d - 2.0 * f).collect();
    let claim = record("claim_delta_exceeds_two_phi", &claim, tol, |k| json!({ "delta": grid[k] }));
    Ok(vec![mono, range, inverse, claim])
}

fn quad_checks(cfg: &CampaignConfig) -> Result<Vec<CheckRecord>> {
    let axis = open_grid(0.05, FRAC_PI_2 - 0.05, cfg.quad_steps);
    let pairs: Vec<(f64, f64)> = axis.iter().flat_map(|&k| axis.iter().map(move |&l| (k, l))).collect();
    let rows = pairs
        .iter()
        .map(|&(k, l)| {
            let emb = construct_quad(k, l)?;
            let measured = emb.measure();
            let solved = solve_quad(k, l)?;
            let identities = check_identities(&measured)
                .into_iter()
                .chain([measured.diagonal_residual()])
                .fold(0.0, f64::max);
            let angles = emb.angles()?;
            let right = angles[..3].iter().map(|a| (a - FRAC_PI_2).abs()).fold(0.0, f64::max);
            Ok((identities, solved.max_side_difference(&measured), right))
        })
        .collect::<Result<Vec<_>>>()?;
    let payload = |k: usize| json!({ "kappa": pairs[k].0, "lambda": pairs[k].1 });
    let tol = cfg.tolerance;
    Ok(vec![
        record("theorem1_identities", &rows.iter().map(|r| -r.0).collect::<Vec<_>>(), tol, payload),
        record("theorem1_solver_vs_constructor", &rows.iter().map(|r| -r.1).collect::<Vec<_>>(), tol, payload),
        record("theorem1_right_angles", &rows.iter().map(|r| -r.2).collect::<Vec<_>>(), tol, payload),
    ])
}

fn lune_checks(cfg: &CampaignConfig) -> Result<Vec<CheckRecord>> {
    let deltas = open_grid(FRAC_PI_2 + 0.01, PI - 0.01, cfg.lune_steps);
    let mut equilateral = Vec::with_capacity(deltas.len());
    let mut part_i = Vec::with_capacity(deltas.len());
    let mut part_iii = Vec::with_capacity(deltas.len());
    for &d in &deltas {
        let lune = construct_lune(d)?;
        let (i, j) = proposition_points(&lune)?;
        let side = 2.0 * phi(d)?;
        let h = lune.h_center;
        let res = [distance(&i, &h), distance(&j, &h), distance(&i, &j)]
            .into_iter()
            .map(|x| (x - side).abs())
            .fold(0.0, f64::max);
        equilateral.push(-res);

        let ij = GeodesicArc::new(i, j)?;
        let min_kh = unit_grid(1000)
            .into_iter()
            .map(|t| distance(&ij.point_at_unchecked(t), &h))
            .fold(f64::INFINITY, f64::min);
        part_i.push(min_kh - side);

        part_iii.push(check_part_iii(&lune, cfg.lune_samples, cfg.lune_samples)?);
    }
    let tol = cfg.tolerance;
    let margins: Vec<f64> = part_iii.iter().map(|o| o.margin()).collect();
    Ok(vec![
        record("proposition_equilateral", &equilateral, tol, |k| json!({ "delta": deltas[k] })),
        record("proposition_part_i_min", &part_i, tol, |k| json!({ "delta": deltas[k] })),
        record("proposition_part_iii", &margins, tol, |k| {
            json!({ "delta": deltas[k], "k": part_iii[k].k, "l": part_iii[k].l, "samples": cfg.lune_samples })
        }),
    ])
}

fn body_checks(cfg: &CampaignConfig) -> Result<Vec<CheckRecord>> {
    let trials = theorem2_trials(cfg.seed, cfg.trials)?;
    let tol = cfg.tolerance;
    let payload = |k: usize| {
        let t = &trials[k];
        let mut v = polygon_payload(cfg.seed, t.index, t.index, &t.polygon);
        v["diameter"] = json!(t.diameter);
        v["extreme_diameter"] = json!(t.extreme_diameter);
        v
    };
    let margins: Vec<f64> = trials.iter().map(|t| t.margin).collect();
    let ratios: Vec<f64> = trials.iter().map(|t| t.ratio - 2.0 / 3.0).collect();
    let theorem2 = record("theorem2_monte_carlo", &margins, tol, payload);
    let corollary = record("corollary_ratio", &ratios, tol, payload);

    let narrow: Vec<NarrowTrial> = (0..cfg.narrow_trials as u64)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| narrow_trial(cfg.seed, k))
        .collect::<Result<_>>()?;
    let gaps: Vec<f64> = narrow.iter().map(|t| -(t.diameter - t.extreme_diameter).abs()).collect();
    let narrow_rec = record("narrow_diameter_equality", &gaps, tol, |k| {
        let t = &narrow[k];
        polygon_payload(cfg.seed, t.index, NARROW_STREAM_OFFSET + t.index, &t.polygon)
    });
    Ok(vec![theorem2, corollary, narrow_rec])
}

/// Runs every check in a fixed order. Deterministic for a given config, apart from
/// `wall_time_s`.
pub fn run_verify(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let start = Instant::now();
    let mut checks = lemma_checks(config)?;
    checks.extend(quad_checks(config)?);
    checks.extend(lune_checks(config)?);
    checks.extend(body_checks(config)?);
    let pass = checks.iter().all(|c| c.pass);
    Ok(CampaignReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        checks,
        pass,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiRow {
    pub delta: f64,
    pub phi: f64,
    pub two_phi: f64,
    pub claim_margin: f64,
}

/// `phi` over `steps` interior points of `(pi/2, pi)`.
pub fn emit_phi_curve(steps: usize) -> Result<Vec<PhiRow>> {
    if steps < 2 {
        return Err(GeometryError::Config("steps must be at least 2".into()));
    }
    open_grid(FRAC_PI_2, PI, steps)
        .into_iter()
        .map(|delta| {
            let f = phi(delta)?;
            Ok(PhiRow { delta, phi: f, two_phi: 2.0 * f, claim_margin: delta - 2.0 * f })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightnessRow {
    pub delta: f64,
    pub diam: f64,
    pub diam_e: f64,
    pub margin: f64,
    pub ratio: f64,
    pub attainment: Attainment,
}

/// For each `delta`, the regular triangle of side `2 phi(delta)` and its diameters.
pub fn run_tightness(deltas: &[f64]) -> Result<Vec<TightnessRow>> {
    deltas
        .iter()
        .map(|&delta| {
            let side = 2.0 * phi(delta)?;
            let tri = regular_triangle(side)?;
            let w = boundary_diameter(&tri);
            let diam_e = extreme_diameter(&tri);
            Ok(TightnessRow {
                delta,
                diam: w.value,
                diam_e,
                margin: diam_e - 2.0 * phi(w.value)?,
                ratio: diam_e / w.value,
                attainment: w.attainment,
            })
        })
        .collect()
}

/// `steps` interior points of `(pi/2, pi)` for [`run_tightness`].
pub fn tightness_grid(steps: usize) -> Vec<f64> {
    open_grid(FRAC_PI_2, PI, steps)
}
