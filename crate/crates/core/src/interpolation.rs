//! Scans of the family of surfaces with fixed projective widths and varying
//! total boundary length, between the decorated limit (small boundary) and
//! the combinatorial limit (large boundary).

use serde::Serialize;
use thiserror::Error;

use crate::newton::NewtonOptions;
use crate::poisson::{kontsevich_bivector, normalized_bivector_with_step, GRADIENT_STEP};
use crate::ribbon::RibbonStructure;
use crate::spine::{solve_widths_from, SpineError};
use crate::surface::MaximalCoordinates;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ScanError {
    #[error("projective widths must be nonnegative, sum to 1 and have proper support")]
    InvalidWeights,
    #[error("totals must be positive")]
    InvalidTotal,
    #[error(transparent)]
    Spine(#[from] SpineError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub newton: NewtonOptions,
    /// Chain solves through the scale list, or solve every scale from scratch
    /// in parallel.
    pub warm_start: bool,
    pub fd_step: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            newton: NewtonOptions::default(),
            warm_start: true,
            fd_step: GRADIENT_STEP,
        }
    }
}

/// Comparison with the decorated limit, available when `Σp ≤ 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecoratedRecord {
    pub lambda: Vec<f64>,
    /// `X(α)` per arc.
    pub simplicial: Vec<f64>,
    /// `2 w(α) / sin θ` per arc.
    pub normalized_widths: Vec<f64>,
    /// `max |2w/(X sin θ) − 1|` over the support.
    pub width_gap: f64,
    /// `max |t_α λ_α / (t_β λ_β) − 1|` over pairs of support arcs.
    pub t_lambda_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub total: f64,
    pub a: Vec<f64>,
    pub t: Vec<f64>,
    /// Per-arc widths.
    pub w: Vec<f64>,
    pub w_darts: Vec<f64>,
    /// `max |2 w(→α)/t_α − 1|` over darts of support arcs.
    pub ratio_gap: f64,
    /// `max |η̃ − H̃|` when the support is trivalent.
    pub kontsevich_deviation: Option<f64>,
    pub decorated: Option<DecoratedRecord>,
    pub residual_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyScan {
    pub completion: RibbonStructure,
    pub projective: Vec<f64>,
    pub records: Vec<ScanRecord>,
}

/// Solves for the surface with widths `projective · total/2` for every total
/// and records the limit diagnostics. Failed scales are kept with
/// `residual_error` set and empty vectors.
pub fn family_scan(
    completion: &RibbonStructure,
    projective: &[f64],
    totals: &[f64],
    opts: &ScanOptions,
) -> Result<FamilyScan, ScanError> {
    let sum: f64 = projective.iter().sum();
    if projective.len() != completion.n_arcs()
        || projective.iter().any(|&w| !(w >= 0.0))
        || (sum - 1.0).abs() > 1e-9
    {
        return Err(ScanError::InvalidWeights);
    }
    crate::spine::WeightedArcSystem::from_completion(completion, projective)
        .map_err(|_| ScanError::InvalidWeights)?;
    if totals.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
        return Err(ScanError::InvalidTotal);
    }
    let targets = |p: f64| projective.iter().map(|w| w * 0.5 * p).collect::<Vec<_>>();
    let solved: Vec<Result<MaximalCoordinates, SpineError>> = if opts.warm_start {
        let mut out = Vec::with_capacity(totals.len());
        let mut prev: Option<(f64, Vec<f64>)> = None;
        for &p in totals {
            // w ≈ t/2 is homogeneous, so rescale the last t-lengths
            let start = prev.as_ref().map(|(q, t)| t.iter().map(|x| x * p / q).collect::<Vec<_>>());
            let r = solve_widths_from(completion, &targets(p), start.as_deref(), &opts.newton)
                .or_else(|_| solve_widths_from(completion, &targets(p), None, &opts.newton));
            if let Ok(m) = &r {
                prev = Some((p, m.t_lengths()));
            }
            out.push(r);
        }
        out
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = totals
                .iter()
                .map(|&p| {
                    let target = targets(p);
                    scope.spawn(move || solve_widths_from(completion, &target, None, &opts.newton))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("solver thread panicked"))
                .collect()
        })
    };
    let records = totals
        .iter()
        .zip(solved)
        .map(|(&p, r)| match r {
            Ok(m) => record(&m, p, projective, opts.fd_step),
            Err(e) => ScanRecord {
                total: p,
                a: vec![],
                t: vec![],
                w: vec![],
                w_darts: vec![],
                ratio_gap: f64::NAN,
                kontsevich_deviation: None,
                decorated: None,
                residual_error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(FamilyScan {
        completion: completion.clone(),
        projective: projective.to_vec(),
        records,
    })
}

fn record(m: &MaximalCoordinates, total: f64, projective: &[f64], fd_step: f64) -> ScanRecord {
    let widths = m.all_widths();
    let t = m.t_lengths();
    let support: Vec<usize> = (0..projective.len()).filter(|&k| projective[k] > 0.0).collect();
    let ratio_gap = support
        .iter()
        .flat_map(|&k| [2 * k, 2 * k + 1])
        .map(|d| (2.0 * widths.per_dart[d] / t[d / 2] - 1.0).abs())
        .fold(0.0, f64::max);
    let kontsevich_deviation = if support.len() == projective.len() {
        match (normalized_bivector_with_step(m, fd_step), kontsevich_bivector(m.ribbon())) {
            (Ok(eta), Ok(h)) => Some(eta.deviation(&h)),
            _ => None,
        }
    } else {
        None
    };
    let decorated = decorated_record(m, &t, &support);
    ScanRecord {
        total,
        a: m.a_lengths().to_vec(),
        t,
        w: widths.per_arc,
        w_darts: widths.per_dart,
        ratio_gap,
        kontsevich_deviation,
        decorated,
        residual_error: None,
    }
}

fn decorated_record(m: &MaximalCoordinates, t: &[f64], support: &[usize]) -> Option<DecoratedRecord> {
    let d = m.lambda_lengths().ok()?;
    let x = d.simplicial_coordinates().per_arc;
    let nw = m.normalized_widths().ok()?.per_arc;
    let lambda = d.lambda().to_vec();
    let width_gap = support
        .iter()
        .map(|&k| (nw[k] / x[k] - 1.0).abs())
        .fold(0.0, f64::max);
    let mut t_lambda_gap: f64 = 0.0;
    for &i in support {
        for &j in support {
            let r = t[i] * lambda[i] / (t[j] * lambda[j]);
            t_lambda_gap = t_lambda_gap.max((r - 1.0).abs());
        }
    }
    Some(DecoratedRecord {
        lambda,
        simplicial: x,
        normalized_widths: nw,
        width_gap,
        t_lambda_gap,
    })
}
