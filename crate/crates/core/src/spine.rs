//! Spinal arc systems: the width map `W` by flipping arcs of negative width,
//! and its inverse by Newton's method in t-lengths.

use serde::Serialize;
use thiserror::Error;

use crate::hexagon::transverse;
use crate::newton::{damped_newton, NewtonOptions};
use crate::perm::Permutation;
use crate::plane::{closure_tolerance, walk_polygon, Frame, PlaneError, RealizedHexagon};
use crate::ribbon::{Dart, RibbonError, RibbonStructure};
use crate::surface::{MaximalCoordinates, SurfaceError};

/// Widths within this distance of zero count as zero.
pub const ZERO_WIDTH_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SpineError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("arc {arc} is out of range")]
    ArcOutOfRange { arc: usize },
    #[error("arc {arc} cannot be flipped: both its sides lie on one hexagon")]
    NonFlippable { arc: usize },
    #[error("no spine after {flips} flips (cap {cap})")]
    FlipLimitExceeded { flips: usize, cap: usize },
    #[error("Newton iteration stopped after {iterations} steps with residual {residual:.3e}")]
    NoConvergence {
        best: Box<MaximalCoordinates>,
        residual: f64,
        iterations: usize,
    },
    #[error("invalid width target: {0}")]
    InvalidTarget(String),
}

/// A proper arc system with positive weights; the datum `W(f)` for a surface.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedArcSystem {
    ribbon: RibbonStructure,
    weights: Vec<f64>,
    /// Index of each arc in the maximal system it was cut from.
    host_arcs: Vec<usize>,
}

impl WeightedArcSystem {
    pub fn new(ribbon: RibbonStructure, weights: Vec<f64>) -> Result<Self, SpineError> {
        let host_arcs = (0..ribbon.n_arcs()).collect();
        Self::with_hosts(ribbon, weights, host_arcs)
    }

    pub fn with_hosts(
        ribbon: RibbonStructure,
        weights: Vec<f64>,
        host_arcs: Vec<usize>,
    ) -> Result<Self, SpineError> {
        if weights.len() != ribbon.n_arcs() || host_arcs.len() != ribbon.n_arcs() {
            return Err(SpineError::InvalidTarget(format!(
                "{} weights and {} host arcs for {} arcs",
                weights.len(),
                host_arcs.len(),
                ribbon.n_arcs()
            )));
        }
        if let Some((k, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, &w)| !(w > 0.0 && w.is_finite()))
        {
            return Err(SpineError::InvalidTarget(format!("arc {k} has weight {w}")));
        }
        if !ribbon.classify_complement().proper {
            return Err(SpineError::InvalidTarget("support is not proper".into()));
        }
        Ok(Self {
            ribbon,
            weights,
            host_arcs,
        })
    }

    /// The arcs of `completion` with weight above the zero tolerance.
    pub fn from_completion(completion: &RibbonStructure, weights: &[f64]) -> Result<Self, SpineError> {
        if weights.len() != completion.n_arcs() {
            return Err(SpineError::InvalidTarget(format!(
                "{} weights for {} arcs",
                weights.len(),
                completion.n_arcs()
            )));
        }
        let support: Vec<usize> = (0..weights.len())
            .filter(|&k| weights[k] > ZERO_WIDTH_TOLERANCE)
            .collect();
        let (ribbon, hosts) = completion.restrict(&support)?;
        let w = hosts.iter().map(|&k| weights[k]).collect();
        Self::with_hosts(ribbon, w, hosts)
    }

    pub fn ribbon(&self) -> &RibbonStructure {
        &self.ribbon
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn host_arcs(&self) -> &[usize] {
        &self.host_arcs
    }

    /// `Σ_k p_k = 2 Σ_α w(α)`.
    pub fn total_boundary(&self) -> f64 {
        2.0 * self.weights.iter().sum::<f64>()
    }

    /// `p_k = Σ` of the weights of darts ending on circle `k`.
    pub fn boundary_lengths(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.ribbon.signature().n_boundary()];
        for d in self.ribbon.darts() {
            p[self.ribbon.circle_of(d)] += self.weights[d.arc()];
        }
        p
    }

    /// Same support, weights multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            ribbon: self.ribbon.clone(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
            host_arcs: self.host_arcs.clone(),
        }
    }

    /// Whether the support is itself a maximal (trivalent) system.
    pub fn is_trivalent(&self) -> bool {
        self.ribbon.is_maximal()
    }

    /// Isomorphic supports (preserving boundary labels) with weights within
    /// `tol` of each other.
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        self.ribbon
            .find_isomorphism_with(&other.ribbon, |d, e| {
                (self.weights[d.arc()] - other.weights[e.arc()]).abs() <= tol
            })
            .is_some()
    }
}

/// One elementary move between maximal systems.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlipMove {
    pub arc: usize,
    /// The hexagons on either side of the arc before the flip, starting at
    /// `→α` and `←α`.
    pub hexagons: [[usize; 3]; 2],
    pub old_length: f64,
    pub new_length: f64,
    pub old_width: f64,
}

/// Realizes the hexagon with arc side `d` first, in `σ0` order, from `start`.
pub fn realize_dart_hexagon(
    m: &MaximalCoordinates,
    gaps: &[f64],
    d: Dart,
    start: Frame,
) -> Result<RealizedHexagon, PlaneError> {
    let [e, b, c] = m.hexagon(d);
    let lengths = [
        m.length(e),
        gaps[e.index()],
        m.length(b),
        gaps[b.index()],
        m.length(c),
        gaps[c.index()],
    ];
    let (sides, frames, error, size) = walk_polygon(start, &lengths);
    let tolerance = closure_tolerance(size);
    if !(error <= tolerance) {
        return Err(PlaneError::NumericalClosureFailure { error, tolerance });
    }
    Ok(RealizedHexagon {
        sides: sides.try_into().expect("six sides"),
        lengths,
        frames: frames.try_into().expect("six frames"),
        closure_error: error,
    })
}

/// Replaces arc `arc` by the other diagonal of the octagon formed by its two
/// hexagons. The new arc keeps the index `arc`; its forward dart ends on the
/// circle of the old `σ0 →α`. Other arcs keep their lengths.
pub fn flip(m: &MaximalCoordinates, arc: usize) -> Result<(MaximalCoordinates, FlipMove), SpineError> {
    let r = m.ribbon();
    if arc >= r.n_arcs() {
        return Err(SpineError::ArcOutOfRange { arc });
    }
    let e = Dart::forward(arc);
    let e2 = Dart::backward(arc);
    let h1 = m.hexagon(e);
    let h2 = m.hexagon(e2);
    if h1.contains(&e2) {
        return Err(SpineError::NonFlippable { arc });
    }
    let [_, b, c] = h1;
    let [_, d, f] = h2;

    let gaps = m.gaps();
    let first = realize_dart_hexagon(m, &gaps, e, Frame::origin())?;
    // the second hexagon is glued along the arc side, on its right
    let end_of_arc = first.frames[0].advance(m.length(e));
    let second = realize_dart_hexagon(m, &gaps, e2, end_of_arc.reversed())?;
    let new_length = first.sides[3].distance(&second.sides[3])?;

    let n = r.n_darts();
    let mut s0: Vec<usize> = r.sigma0_perm().images().to_vec();
    let (x, y) = (e.index(), e2.index());
    s0[c.index()] = d.index();
    s0[d.index()] = x;
    s0[x] = c.index();
    s0[f.index()] = b.index();
    s0[b.index()] = y;
    s0[y] = f.index();
    let s0_inv = Permutation::from_images(s0)
        .expect("flip rewires two 3-cycles")
        .inverse();
    let sigma_inf: Vec<usize> = (0..n).map(|z| s0_inv.apply(z ^ 1)).collect();
    let mut circles = r.circle_of_dart().to_vec();
    circles[x] = circles[sigma_inf[x]];
    circles[y] = circles[sigma_inf[y]];
    let ribbon = RibbonStructure::new(r.signature(), sigma_inf, circles)?;

    let mut a = m.a_lengths().to_vec();
    let old_length = a[arc];
    a[arc] = new_length;
    let old_width = m.widths()[arc];
    let flipped = MaximalCoordinates::new(ribbon, a)?;
    Ok((
        flipped,
        FlipMove {
            arc,
            hexagons: [h1.map(Dart::index), h2.map(Dart::index)],
            old_length,
            new_length,
            old_width,
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpineOptions {
    /// Defaults to `10 N²` for `N` arcs.
    pub max_flips: Option<usize>,
    pub zero_tol: f64,
}

impl Default for SpineOptions {
    fn default() -> Self {
        Self {
            max_flips: None,
            zero_tol: ZERO_WIDTH_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpineResult {
    pub spine: WeightedArcSystem,
    /// The maximal system where flipping stopped.
    pub maximal: MaximalCoordinates,
    pub flips: Vec<FlipMove>,
    /// Arcs of `maximal` with width in `[−zero_tol, zero_tol]`.
    pub zero_arcs: Vec<usize>,
}

/// Flips the arc of most negative width (lowest index on ties) until no
/// width is below `−zero_tol`.
pub fn find_spine(m: &MaximalCoordinates, opts: &SpineOptions) -> Result<SpineResult, SpineError> {
    let n = m.ribbon().n_arcs();
    let cap = opts.max_flips.unwrap_or(10 * n * n);
    let mut current = m.clone();
    let mut flips = Vec::new();
    loop {
        let w = current.widths();
        let (k, wk) = w
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (k, x)| if x < best.1 { (k, x) } else { best });
        if wk >= -opts.zero_tol {
            let zero_arcs = (0..n).filter(|&k| w[k].abs() <= opts.zero_tol).collect();
            let support: Vec<f64> = w
                .iter()
                .map(|&x| if x > opts.zero_tol { x } else { 0.0 })
                .collect();
            let spine = WeightedArcSystem::from_completion(current.ribbon(), &support)?;
            return Ok(SpineResult {
                spine,
                maximal: current,
                flips,
                zero_arcs,
            });
        }
        if flips.len() >= cap {
            return Err(SpineError::FlipLimitExceeded {
                flips: flips.len(),
                cap,
            });
        }
        let (next, mv) = flip(&current, k)?;
        log::debug!("flip arc {k}: width {wk:.3e}, length {:.6} -> {:.6}", mv.old_length, mv.new_length);
        flips.push(mv);
        current = next;
    }
}

/// Lengths beyond this make `sinh` overflow in the hexagon formulas.
const MAX_LENGTH: f64 = 700.0;

/// Solves for a-lengths on the maximal system `completion` with per-arc
/// widths `targets` (zero off the support). Newton runs in t-lengths from
/// `t = 2w`, using `w ≈ t/2` for long boundaries.
pub fn solve_widths_on(
    completion: &RibbonStructure,
    targets: &[f64],
    opts: &NewtonOptions,
) -> Result<MaximalCoordinates, SpineError> {
    solve_widths_from(completion, targets, None, opts)
}

/// [`solve_widths_on`] with an explicit starting point in t-lengths.
pub fn solve_widths_from(
    completion: &RibbonStructure,
    targets: &[f64],
    t_start: Option<&[f64]>,
    opts: &NewtonOptions,
) -> Result<MaximalCoordinates, SpineError> {
    if !completion.is_maximal() {
        return Err(SpineError::InvalidTarget("completion is not maximal".into()));
    }
    if targets.len() != completion.n_arcs() {
        return Err(SpineError::InvalidTarget(format!(
            "{} targets for {} arcs",
            targets.len(),
            completion.n_arcs()
        )));
    }
    if targets.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
        return Err(SpineError::InvalidTarget("targets must be nonnegative".into()));
    }
    let min_positive = targets
        .iter()
        .copied()
        .filter(|&w| w > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !min_positive.is_finite() {
        return Err(SpineError::InvalidTarget("all targets vanish".into()));
    }
    let t0: Vec<f64> = match t_start {
        Some(t) if t.len() == targets.len() => t.to_vec(),
        Some(_) => return Err(SpineError::InvalidTarget("starting point has the wrong length".into())),
        None => targets
            .iter()
            .map(|&w| if w > 0.0 { 2.0 * w } else { min_positive })
            .collect(),
    };
    let template = MaximalCoordinates::new(completion.clone(), vec![1.0; completion.n_arcs()])?;
    let residual = |t: &[f64]| -> Vec<f64> {
        let a: Vec<f64> = t.iter().map(|&x| transverse(x)).collect();
        let m = template.with_lengths(a).expect("admissible lengths");
        m.widths().iter().zip(targets).map(|(w, g)| w - g).collect()
    };
    let admissible = |t: &[f64]| {
        t.iter().all(|&x| {
            let a = transverse(x);
            x > 0.0 && x.is_finite() && a > 0.0 && a < MAX_LENGTH
        })
    };
    // iterate past `tol` so that zero targets come out well inside the
    // zero-width tolerance
    let inner = NewtonOptions {
        tol: opts.tol.min(1e-3 * opts.tol.max(1e-12)),
        ..*opts
    };
    let out = damped_newton(residual, t0, admissible, &inner);
    let best = MaximalCoordinates::from_t_lengths(completion.clone(), &out.x)?;
    if out.residual <= opts.tol {
        Ok(best)
    } else {
        Err(SpineError::NoConvergence {
            best: Box::new(best),
            residual: out.residual,
            iterations: out.iterations,
        })
    }
}

/// Inverse of the width map: a surface whose spine is `target`, expressed
/// on the maximal system `completion` that contains the support as the arcs
/// `target.host_arcs()`.
pub fn solve_widths(
    target: &WeightedArcSystem,
    completion: &RibbonStructure,
    opts: &NewtonOptions,
) -> Result<MaximalCoordinates, SpineError> {
    if target.host_arcs.iter().any(|&k| k >= completion.n_arcs()) {
        return Err(SpineError::InvalidTarget("host arc out of range".into()));
    }
    let (restricted, hosts) = completion.restrict(&target.host_arcs)?;
    if hosts.len() != target.ribbon.n_arcs() {
        return Err(SpineError::InvalidTarget("repeated host arcs".into()));
    }
    let iso = restricted
        .find_isomorphism(&target.ribbon)
        .ok_or_else(|| SpineError::InvalidTarget("support does not sit in the completion".into()))?;
    let mut full = vec![0.0; completion.n_arcs()];
    for (j, &host) in hosts.iter().enumerate() {
        full[host] = target.weights[iso.apply(2 * j) / 2];
    }
    solve_widths_on(completion, &full, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::SurfaceSignature;
    use crate::sample::{one_holed_torus, pair_of_pants, random_lengths, random_maximal_ribbon, random_signature};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rel_close(x: &[f64], y: &[f64], tol: f64) -> bool {
        x.iter().zip(y).all(|(a, b)| (a - b).abs() <= tol * a.abs().max(1.0))
    }

    #[test]
    fn flip_on_the_torus_preserves_boundary() {
        let m = MaximalCoordinates::new(one_holed_torus(), vec![0.7, 1.3, 2.1]).unwrap();
        for arc in 0..3 {
            let (f, mv) = flip(&m, arc).unwrap();
            assert!(f.ribbon().is_maximal());
            assert!(rel_close(&m.boundary_lengths(), &f.boundary_lengths(), 1e-12));
            assert_eq!(mv.old_length, m.a_lengths()[arc]);
            let (back, _) = flip(&f, arc).unwrap();
            assert!(rel_close(m.a_lengths(), back.a_lengths(), 1e-10));
        }
    }

    #[test]
    fn symmetric_torus_flip_keeps_multiset() {
        let a = 2.0 * 1f64.asinh();
        let m = MaximalCoordinates::new(one_holed_torus(), vec![a; 3]).unwrap();
        for arc in 0..3 {
            let (f, _) = flip(&m, arc).unwrap();
            assert_relative_eq!(f.boundary_lengths()[0], 5.774_541_900_715_241_4, epsilon = 1e-10);
            // flipping an arc of positive width makes it negative
            assert!(f.widths()[arc] < 0.0);
            assert_relative_eq!(f.widths()[arc], -m.widths()[arc], epsilon = 1e-10);
        }
    }

    #[test]
    fn flip_negates_width_of_the_arc() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let sig = random_signature(&mut rng, 2, 3);
            let r = random_maximal_ribbon(&mut rng, sig);
            let m = MaximalCoordinates::new(r.clone(), random_lengths(&mut rng, r.n_arcs(), 0.3, 3.0)).unwrap();
            for arc in 0..r.n_arcs() {
                match flip(&m, arc) {
                    Ok((f, _)) => {
                        let (w0, w1) = (m.widths()[arc], f.widths()[arc]);
                        assert!((w0 + w1).abs() <= 1e-8 * w0.abs().max(1.0), "{w0} {w1}");
                    }
                    Err(SpineError::NonFlippable { .. }) => assert!(m.widths()[arc] > 0.0),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn long_seam_on_pants_is_flipped_away() {
        let m = MaximalCoordinates::new(pair_of_pants(), vec![4.0, 0.2, 0.3]).unwrap();
        let s = find_spine(&m, &SpineOptions::default()).unwrap();
        assert_eq!(s.flips[0].arc, 0);
        assert!(rel_close(&m.boundary_lengths(), &s.spine.boundary_lengths(), 1e-9));
        let short = MaximalCoordinates::new(pair_of_pants(), vec![1.0, 1.1, 1.2]).unwrap();
        assert!(find_spine(&short, &SpineOptions::default()).unwrap().flips.is_empty());
    }

    #[test]
    fn symmetric_torus_is_its_own_spine() {
        let a = 2.0 * 1f64.asinh();
        let m = MaximalCoordinates::new(one_holed_torus(), vec![a; 3]).unwrap();
        let s = find_spine(&m, &SpineOptions::default()).unwrap();
        assert!(s.flips.is_empty());
        assert_eq!(s.spine.weights().len(), 3);
        for &w in s.spine.weights() {
            assert_relative_eq!(w, 0.962_423_650_119_206_9, epsilon = 1e-12);
        }
    }

    #[test]
    fn negative_width_triggers_a_flip() {
        let m = MaximalCoordinates::new(one_holed_torus(), vec![4.0, 0.5, 0.5]).unwrap();
        let s = find_spine(&m, &SpineOptions::default()).unwrap();
        assert_eq!(s.flips.len(), 1);
        assert_eq!(s.flips[0].arc, 0);
        assert!(s.flips[0].new_length < 4.0);
        assert!(s.maximal.widths().iter().all(|&w| w >= -1e-10));
        assert!(rel_close(&m.boundary_lengths(), &s.spine.boundary_lengths(), 1e-9));
    }

    #[test]
    fn flip_cap_is_reported() {
        let m = MaximalCoordinates::new(one_holed_torus(), vec![4.0, 0.5, 0.5]).unwrap();
        let opts = SpineOptions {
            max_flips: Some(0),
            ..Default::default()
        };
        assert_eq!(
            find_spine(&m, &opts),
            Err(SpineError::FlipLimitExceeded { flips: 0, cap: 0 })
        );
    }

    #[test]
    fn find_spine_on_random_surfaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let sig = random_signature(&mut rng, 2, 3);
            let r = random_maximal_ribbon(&mut rng, sig);
            let m = MaximalCoordinates::new(r.clone(), random_lengths(&mut rng, r.n_arcs(), 0.3, 3.0)).unwrap();
            let s = find_spine(&m, &SpineOptions::default()).unwrap();
            assert!(s.maximal.widths().iter().all(|&w| w >= -1e-10));
            assert!(rel_close(&m.boundary_lengths(), &s.spine.boundary_lengths(), 1e-8));
        }
    }

    #[test]
    fn symmetric_torus_widths_invert() {
        let c = 2.0 * 0.5f64.asinh();
        let target = WeightedArcSystem::new(one_holed_torus(), vec![c; 3]).unwrap();
        let m = solve_widths(&target, &one_holed_torus(), &NewtonOptions::default()).unwrap();
        for &a in m.a_lengths() {
            assert_relative_eq!(a, 2.0 * 1f64.asinh(), epsilon = 1e-8);
        }
    }

    #[test]
    fn larger_widths_give_shorter_arcs() {
        let mut prev = f64::INFINITY;
        for c in [0.1, 1.0, 10.0] {
            let target = WeightedArcSystem::new(one_holed_torus(), vec![c; 3]).unwrap();
            let m = solve_widths(&target, &one_holed_torus(), &NewtonOptions::default()).unwrap();
            let a = m.a_lengths()[0];
            assert!(a < prev);
            prev = a;
        }
    }

    #[test]
    fn zero_weight_arcs_are_solved_to_zero() {
        // weights (1, 1, 0) on the torus: the octagon spine
        let targets = [1.0, 1.0, 0.0];
        let m = solve_widths_on(&one_holed_torus(), &targets, &NewtonOptions::default()).unwrap();
        let w = m.widths();
        assert!(w[2].abs() <= 1e-10);
        let s = find_spine(&m, &SpineOptions::default()).unwrap();
        assert_eq!(s.spine.weights().len(), 2);
        assert_eq!(s.zero_arcs, vec![2]);
    }

    #[test]
    fn improper_targets_are_rejected() {
        let sig = SurfaceSignature::new(1, 1).unwrap();
        let single = RibbonStructure::new(sig, vec![1, 0], vec![0, 0]).unwrap();
        assert!(matches!(
            WeightedArcSystem::new(single, vec![1.0]),
            Err(SpineError::InvalidTarget(_))
        ));
    }
}
