use std::fmt::Write;

use arccoord::poisson::{casimir_residual_with_step, kontsevich_bivector, normalized_bivector_with_step, poisson_bivector};
use arccoord::sample::{random_lengths, random_maximal_ribbon};
use arccoord::spine::solve_widths_on;
use arccoord::strebel::render_svg;
use arccoord::{
    build_flat_surface, family_scan, find_spine, ArcBivector, FlipMove, MaximalCoordinates, ScanOptions,
    SurfaceFile, SurfaceSignature, WeightedRibbonGraph,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// Bumped whenever a CSV column changes.
const CSV_SCHEMA: u32 = 1;

fn csv_header(command: &str, columns: &str) -> String {
    format!("# arccoord {command} csv schema {CSV_SCHEMA}\n{columns}\n")
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Input(format!("`{command}` cannot write {format:?} output"))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// The final maximal system, written so that it reads back as a
/// `solve-widths` input: `weights` are the widths with zeros off the spine.
#[derive(Serialize)]
struct SpineReport {
    #[serde(flatten)]
    surface: SurfaceFile,
    spine_arcs: Vec<usize>,
    zero_arcs: Vec<usize>,
    flips: Vec<FlipMove>,
}

pub fn spine(input: &SurfaceFile, cfg: &RunConfig) -> Result<String, CliError> {
    let m = input.coordinates()?;
    let result = find_spine(&m, &cfg.spine_options())?;
    log::info!("spine reached after {} flips", result.flips.len());
    let mut weights = vec![0.0; m.ribbon().n_arcs()];
    for (&host, &w) in result.spine.host_arcs().iter().zip(result.spine.weights()) {
        weights[host] = w;
    }
    let report = SpineReport {
        surface: SurfaceFile::from_coordinates(&result.maximal).with_weights(weights),
        spine_arcs: result.spine.host_arcs().to_vec(),
        zero_arcs: result.zero_arcs,
        flips: result.flips,
    };
    match cfg.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = csv_header("spine", "arc,a,width,in_spine");
            let w = report.surface.weights.as_deref().unwrap_or_default();
            for (k, a) in result.maximal.a_lengths().iter().enumerate() {
                let _ = writeln!(out, "{k},{a},{},{}", w[k], report.spine_arcs.contains(&k));
            }
            Ok(out)
        }
        f => Err(unsupported("spine", f)),
    }
}

#[derive(Serialize)]
struct SolveReport {
    #[serde(flatten)]
    surface: SurfaceFile,
    residual: f64,
}

pub fn solve_widths(input: &SurfaceFile, cfg: &RunConfig) -> Result<String, CliError> {
    let r = input.ribbon()?;
    let targets = input.weight_vector()?;
    let m = solve_widths_on(&r, targets, &cfg.newton_options())?;
    let w = m.widths();
    let residual = w.iter().zip(targets).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let report = SolveReport {
        surface: SurfaceFile::from_coordinates(&m).with_weights(targets.to_vec()),
        residual,
    };
    match cfg.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = csv_header("solve-widths", "arc,a,t,target,width");
            let t = m.t_lengths();
            for (k, a) in m.a_lengths().iter().enumerate() {
                let _ = writeln!(out, "{k},{a},{},{},{}", t[k], targets[k], w[k]);
            }
            Ok(out)
        }
        f => Err(unsupported("solve-widths", f)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BivectorKind {
    /// Poisson bivector in a-lengths.
    Wp,
    /// Bivector in normalized widths, rescaled by `(1 + L/2)²`.
    Normalized,
    /// Piecewise linear limit on the trivalent ribbon graph.
    Kontsevich,
}

#[derive(Serialize)]
struct PoissonReport {
    kind: BivectorKind,
    arcs: Vec<usize>,
    matrix: Vec<Vec<f64>>,
    antisymmetry_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    casimir_residuals: Option<Vec<f64>>,
}

pub fn poisson(input: &SurfaceFile, kind: BivectorKind, cfg: &RunConfig) -> Result<String, CliError> {
    let (eta, casimir): (ArcBivector, _) = match kind {
        BivectorKind::Kontsevich => (kontsevich_bivector(&input.ribbon()?)?, None),
        BivectorKind::Wp => {
            let m = input.coordinates()?;
            let res = (0..m.ribbon().signature().n_boundary())
                .map(|k| casimir_residual_with_step(&m, k, cfg.fd_step))
                .collect::<Result<Vec<_>, _>>()?;
            (poisson_bivector(&m)?, Some(res))
        }
        BivectorKind::Normalized => (normalized_bivector_with_step(&input.coordinates()?, cfg.fd_step)?, None),
    };
    let n = eta.dim();
    let matrix: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| eta.matrix[(i, j)]).collect()).collect();
    match cfg.format {
        Format::Json => json(&PoissonReport {
            kind,
            arcs: eta.basis.clone(),
            antisymmetry_defect: eta.antisymmetry_defect(),
            matrix,
            casimir_residuals: casimir,
        }),
        Format::Csv => {
            let cols: Vec<String> = eta.basis.iter().map(|k| format!("arc_{k}")).collect();
            let mut out = csv_header("poisson", &format!("arc,{}", cols.join(",")));
            for (i, row) in matrix.iter().enumerate() {
                let vals: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "{},{}", eta.basis[i], vals.join(","));
            }
            Ok(out)
        }
        f => Err(unsupported("poisson", f)),
    }
}

fn projective(input: &SurfaceFile) -> Result<Vec<f64>, CliError> {
    let w = input.weight_vector()?;
    let sum: f64 = w.iter().sum();
    if !(sum > 0.0 && sum.is_finite()) {
        return Err(CliError::Input("weights must have a positive finite sum".into()));
    }
    Ok(w.iter().map(|x| x / sum).collect())
}

fn scan(input: &SurfaceFile, totals: &[f64], cfg: &RunConfig) -> Result<arccoord::FamilyScan, CliError> {
    let opts = ScanOptions {
        newton: cfg.newton_options(),
        warm_start: !cfg.cold_start,
        fd_step: cfg.fd_step,
    };
    Ok(family_scan(&input.ribbon()?, &projective(input)?, totals, &opts)?)
}

#[derive(Serialize)]
struct LimitRow {
    p: f64,
    kontsevich_deviation: Option<f64>,
    ratio_gap: f64,
    error: Option<String>,
}

pub fn limit_scan(input: &SurfaceFile, totals: &[f64], cfg: &RunConfig) -> Result<String, CliError> {
    let s = scan(input, totals, cfg)?;
    let rows: Vec<LimitRow> = s
        .records
        .iter()
        .map(|r| LimitRow {
            p: r.total,
            kontsevich_deviation: r.kontsevich_deviation,
            ratio_gap: r.ratio_gap,
            error: r.residual_error.clone(),
        })
        .collect();
    match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = csv_header("limit-scan", "p,max_deviation,ratio_gap");
            for r in &rows {
                let _ = writeln!(out, "{},{},{}", r.p, opt(r.kontsevich_deviation), r.ratio_gap);
            }
            Ok(out)
        }
        f => Err(unsupported("limit-scan", f)),
    }
}

pub fn interpolate(input: &SurfaceFile, totals: &[f64], cfg: &RunConfig) -> Result<String, CliError> {
    let s = scan(input, totals, cfg)?;
    match cfg.format {
        Format::Json => json(&s.records),
        Format::Csv => {
            let mut out = csv_header(
                "interpolate",
                "p,arc,a,t,w,ratio_gap,kontsevich_deviation,width_gap,t_lambda_gap",
            );
            for r in &s.records {
                let width_gap = r.decorated.as_ref().map(|d| d.width_gap);
                let tl_gap = r.decorated.as_ref().map(|d| d.t_lambda_gap);
                for k in 0..r.a.len() {
                    let _ = writeln!(
                        out,
                        "{},{k},{},{},{},{},{},{},{}",
                        r.total,
                        r.a[k],
                        r.t[k],
                        r.w[k],
                        r.ratio_gap,
                        opt(r.kontsevich_deviation),
                        opt(width_gap),
                        opt(tl_gap)
                    );
                }
            }
            Ok(out)
        }
        f => Err(unsupported("interpolate", f)),
    }
}

#[derive(Serialize)]
struct CylinderReport {
    circle: usize,
    circumference: f64,
    residue: f64,
    boundary_word: Vec<arccoord::Dart>,
}

#[derive(Serialize)]
struct StrebelReport<'a> {
    genus: usize,
    cylinders: Vec<CylinderReport>,
    vertices: &'a [arccoord::strebel::GraphVertex],
    edges: &'a [arccoord::strebel::GraphEdge<f64>],
    tiles: &'a [arccoord::strebel::Tile<f64>],
    divisor: arccoord::strebel::DivisorReport,
}

pub fn strebel(input: &SurfaceFile, cfg: &RunConfig) -> Result<String, CliError> {
    let g = WeightedRibbonGraph::new(&input.ribbon()?, input.weight_vector()?.to_vec())?;
    let c = build_flat_surface(&g)?;
    match cfg.format {
        Format::Svg => Ok(render_svg(&c, cfg.truncation_height)),
        Format::Json => {
            let residues = c.quadratic_residues();
            let cylinders = c
                .cylinders
                .iter()
                .zip(residues)
                .map(|(cyl, residue)| CylinderReport {
                    circle: cyl.circle,
                    circumference: cyl.circumference,
                    residue,
                    boundary_word: cyl.boundary_word.clone(),
                })
                .collect();
            json(&StrebelReport {
                genus: c.genus,
                cylinders,
                vertices: &c.vertices,
                edges: &c.edges,
                tiles: &c.tiles,
                divisor: c.zero_orders(),
            })
        }
        Format::Csv => {
            let mut out = csv_header("strebel", "circle,circumference,residue,tiles");
            for (cyl, res) in c.cylinders.iter().zip(c.quadratic_residues()) {
                let word: Vec<String> = cyl.boundary_word.iter().map(|d| d.index().to_string()).collect();
                let _ = writeln!(out, "{},{},{},{}", cyl.circle, cyl.circumference, res, word.join(" "));
            }
            Ok(out)
        }
    }
}

/// Random maximal system with uniform a-lengths in `[lo, hi)`.
pub fn sample(genus: usize, boundary: usize, lo: f64, hi: f64, cfg: &RunConfig) -> Result<String, CliError> {
    if !(0.0 < lo && lo < hi && hi.is_finite()) {
        return Err(CliError::Input(format!("length range [{lo}, {hi}) is not positive")));
    }
    let sig = SurfaceSignature::new(genus, boundary).map_err(|e| CliError::Input(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r = random_maximal_ribbon(&mut rng, sig);
    let a = random_lengths(&mut rng, r.n_arcs(), lo, hi);
    let m = MaximalCoordinates::new(r, a)?;
    match cfg.format {
        Format::Json => json(&SurfaceFile::from_coordinates(&m)),
        f => Err(unsupported("sample", f)),
    }
}
