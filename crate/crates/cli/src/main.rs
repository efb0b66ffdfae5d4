use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sphere_extremes::lune::{check_part_iii, construct_lune, proposition_points};
use sphere_extremes::polygon::{
    boundary_diameter, convex_hull, extreme_diameter_pair, extreme_points, theorem2_margin, PolygonFile,
    SphericalPolygon,
};
use sphere_extremes::quad::{check_identities, phi, phi_inverse_delta, solve_quad};
use sphere_extremes::sphere::distance;
use sphere_extremes::verify::{
    emit_phi_curve, run_tightness, run_verify, tightness_grid, CampaignConfig, OutputFormat, DEFAULT_SEED,
    DEFAULT_TOLERANCE, DEFAULT_TRIALS,
};

mod output;

#[derive(Parser)]
#[command(name = "sphx", version, about = "Convex geometry on the unit sphere: checks and reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy, Default)]
struct Format {
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (header row included).
    #[arg(long)]
    csv: bool,
}

impl Format {
    fn resolve(self) -> OutputFormat {
        match (self.json, self.csv) {
            (true, _) => OutputFormat::Json,
            (_, true) => OutputFormat::Csv,
            _ => OutputFormat::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification campaign; exits 0 iff every check passes.
    Verify {
        #[arg(long, env = "SPHX_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long = "tol", default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Samples per arc for the lune distance bound.
        #[arg(long, default_value_t = 200)]
        lune_samples: usize,
        /// Random polygons with diameter at most pi/2.
        #[arg(long, default_value_t = 1000)]
        narrow_trials: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Tabulate phi over an open grid of (pi/2, pi).
    PhiCurve {
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Regular triangles of side 2 phi(delta): diameters, margin and ratio.
    Tightness {
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Explicit thickness values; overrides --steps.
        #[arg(long = "delta", num_args = 1..)]
        deltas: Vec<f64>,
        #[command(flatten)]
        format: Format,
    },
    /// Evaluate phi(delta), or delta from phi with --inverse.
    Phi {
        #[arg(long, conflicts_with = "inverse", required_unless_present = "inverse")]
        delta: Option<f64>,
        #[arg(long)]
        inverse: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Solve the quadrilateral with three right angles from its two sides at b.
    Quad {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        json: bool,
    },
    /// Construct the lune of the given thickness and check the triangle inside it.
    Lune {
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
    /// Boundary diameter of a polygon file.
    Diam {
        #[arg(long = "in")]
        input: PathBuf,
        /// Take the convex hull of the listed points first.
        #[arg(long)]
        hull: bool,
        #[arg(long)]
        json: bool,
    },
    /// Extreme points and their diameter for a polygon file.
    Extreme {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        hull: bool,
        #[arg(long)]
        json: bool,
    },
}

fn load_polygon(path: &PathBuf, hull: bool) -> Result<SphericalPolygon> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: PolygonFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let poly = if hull { convex_hull(&file.vertices)? } else { SphericalPolygon::new(file.vertices)? };
    Ok(poly)
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { seed, trials, tolerance, lune_samples, narrow_trials, format } => {
            let config = CampaignConfig {
                seed,
                trials,
                tolerance,
                lune_samples,
                narrow_trials,
                output_format: format.resolve(),
                ..CampaignConfig::default()
            };
            let report = run_verify(&config)?;
            print!("{}", output::render_report(&report, config.output_format)?);
            Ok(report.pass)
        }
        Command::PhiCurve { steps, format } => {
            let rows = emit_phi_curve(steps)?;
            print!("{}", output::render_rows(&rows, format.resolve())?);
            Ok(true)
        }
        Command::Tightness { steps, deltas, format } => {
            let grid = if deltas.is_empty() { tightness_grid(steps) } else { deltas };
            let rows = run_tightness(&grid)?;
            print!("{}", output::render_rows(&rows, format.resolve())?);
            Ok(true)
        }
        Command::Phi { delta, inverse, json } => {
            let (key, input, value) = match (delta, inverse) {
                (Some(d), _) => ("phi", d, phi(d)?),
                (None, Some(f)) => ("delta", f, phi_inverse_delta(f)?),
                (None, None) => bail!("one of --delta or --inverse is required"),
            };
            if json {
                let input_key = if key == "phi" { "delta" } else { "phi" };
                print_json(&json!({ input_key: input, key: value }))?;
            } else {
                println!("{key} = {value:.17}");
            }
            Ok(true)
        }
        Command::Quad { kappa, lambda, json } => {
            let sol = solve_quad(kappa, lambda)?;
            let residuals = check_identities(&sol);
            if json {
                print_json(&json!({
                    "kappa": sol.kappa, "lambda": sol.lambda, "mu": sol.mu,
                    "nu": sol.nu, "xi": sol.xi, "residuals": residuals,
                }))?;
            } else {
                println!("kappa = {:.15}\nlambda = {:.15}\nmu = {:.15}\nnu = {:.15}\nxi = {:.15}", sol.kappa, sol.lambda, sol.mu, sol.nu, sol.xi);
                println!("residuals = {:.3e} {:.3e} {:.3e} {:.3e}", residuals[0], residuals[1], residuals[2], residuals[3]);
            }
            Ok(true)
        }
        Command::Lune { delta, samples, json } => {
            let lune = construct_lune(delta)?;
            let (i, j) = proposition_points(&lune)?;
            let side = 2.0 * phi(lune.thickness)?;
            let h = lune.h_center;
            let part3 = check_part_iii(&lune, samples, samples)?;
            let report = json!({
                "thickness": lune.thickness,
                "g": lune.g_center, "h": h, "i": i, "j": j,
                "corners": [lune.corners.0, lune.corners.1],
                "two_phi": side,
                "part_i": { "ih": distance(&i, &h), "jh": distance(&j, &h) },
                "part_ii": { "ij": distance(&i, &j) },
                "part_iii": { "samples": samples, "min_distance": part3.min_distance, "margin": part3.margin() },
                "claim_margin": lune.thickness - side,
            });
            if json {
                print_json(&report)?;
            } else {
                print!("{}", output::render_flat(&report));
            }
            Ok(part3.margin() >= -DEFAULT_TOLERANCE)
        }
        Command::Diam { input, hull, json } => {
            let poly = load_polygon(&input, hull)?;
            let w = boundary_diameter(&poly);
            let margin = theorem2_margin(&poly).ok();
            if json {
                print_json(&json!({
                    "value": w.value, "p": w.p, "q": w.q,
                    "attainment": w.attainment.as_str(), "theorem2_margin": margin,
                }))?;
            } else {
                println!("diameter = {:.15} ({})", w.value, w.attainment.as_str());
                println!("p = {:?}\nq = {:?}", w.p.to_array(), w.q.to_array());
                if let Some(m) = margin {
                    println!("extreme-diameter margin = {m:.3e}");
                }
            }
            Ok(true)
        }
        Command::Extreme { input, hull, json } => {
            let poly = load_polygon(&input, hull)?;
            let ext = extreme_points(&poly);
            let (value, p, q) = extreme_diameter_pair(&poly);
            if json {
                print_json(&json!({
                    "extreme_points": ext,
                    "diameter": { "value": value, "p": p, "q": q },
                }))?;
            } else {
                println!("{} extreme points", ext.len());
                for e in &ext {
                    println!("  {:?}", e.to_array());
                }
                println!("extreme diameter = {value:.15}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
