//! Hyperbolic surfaces with geodesic boundary in the a-length chart of a
//! maximal arc system.
//!
//! Each `σ0`-orbit `(e, σ0 e, σ0² e)` of the ribbon structure is a
//! right-angled hexagon whose arc sides are the geodesic representatives of
//! the three arcs. The boundary side following the endpoint of `e` joins
//! `e` to `σ0 e` and lies opposite to `σ0⁻¹ e`; its length is the gap between
//! the endpoint of `e` and the next endpoint `σ∞⁻¹ e` on the same circle.

use serde::Serialize;
use thiserror::Error;

use crate::hexagon::{
    boundary_segment_unchecked, oriented_width_from_half_sinh, oriented_width_from_segments,
    s_length, transverse,
};
use crate::ribbon::{Dart, RibbonStructure};

/// Absolute agreement required between the two width formulas, scaled by
/// the boundary side length when that exceeds one.
pub const CONVENTION_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SurfaceError {
    #[error("arc system is not maximal")]
    NotMaximal,
    #[error("expected {expected} lengths, got {got}")]
    LengthCount { expected: usize, got: usize },
    #[error("arc {arc} has non-positive or non-finite length {value}")]
    NonPositiveLength { arc: usize, value: f64 },
    #[error("width formulas disagree at dart {dart}: {direct} vs {from_segments}")]
    ConventionMismatch {
        dart: usize,
        direct: f64,
        from_segments: f64,
    },
    #[error("darts {from} and {to} end on different boundary circles")]
    DifferentCircles { from: usize, to: usize },
    #[error("total boundary length {0} exceeds 1; rescale before taking lambda-lengths")]
    BoundaryTooLong(f64),
    #[error("boundary weights must be nonnegative and sum to 1")]
    InvalidDecoration,
}

fn check_lengths(n: usize, values: &[f64]) -> Result<(), SurfaceError> {
    if values.len() != n {
        return Err(SurfaceError::LengthCount {
            expected: n,
            got: values.len(),
        });
    }
    if let Some((arc, &value)) = values
        .iter()
        .enumerate()
        .find(|(_, &v)| !(v > 0.0 && v.is_finite()))
    {
        return Err(SurfaceError::NonPositiveLength { arc, value });
    }
    Ok(())
}

/// A point of Teichmüller space: positive a-lengths on a maximal arc system.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximalCoordinates {
    ribbon: RibbonStructure,
    a: Vec<f64>,
}

/// Oriented widths per dart and their sums per arc.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Widths {
    pub per_dart: Vec<f64>,
    pub per_arc: Vec<f64>,
}

impl Widths {
    fn from_darts(per_dart: Vec<f64>) -> Self {
        let per_arc = per_dart.chunks_exact(2).map(|p| p[0] + p[1]).collect();
        Self { per_dart, per_arc }
    }

    pub fn total(&self) -> f64 {
        self.per_arc.iter().sum()
    }
}

impl MaximalCoordinates {
    pub fn new(ribbon: RibbonStructure, a: Vec<f64>) -> Result<Self, SurfaceError> {
        if !ribbon.is_maximal() {
            return Err(SurfaceError::NotMaximal);
        }
        check_lengths(ribbon.n_arcs(), &a)?;
        Ok(Self { ribbon, a })
    }

    /// Chart inverse of [`Self::t_lengths`]: `a = T(t)` since `T` is an involution.
    pub fn from_t_lengths(ribbon: RibbonStructure, t: &[f64]) -> Result<Self, SurfaceError> {
        check_lengths(ribbon.n_arcs(), t)?;
        let a = t.iter().map(|&x| transverse(x)).collect();
        Self::new(ribbon, a)
    }

    pub fn from_s_lengths(ribbon: RibbonStructure, s: &[f64]) -> Result<Self, SurfaceError> {
        if let Some((arc, &value)) = s.iter().enumerate().find(|(_, &v)| !(v > 1.0)) {
            return Err(SurfaceError::NonPositiveLength { arc, value });
        }
        let a = s.iter().map(|&x| crate::hexagon::a_from_s(x)).collect();
        Self::new(ribbon, a)
    }

    /// Same arc system, new lengths.
    pub fn with_lengths(&self, a: Vec<f64>) -> Result<Self, SurfaceError> {
        check_lengths(self.ribbon.n_arcs(), &a)?;
        Ok(Self {
            ribbon: self.ribbon.clone(),
            a,
        })
    }

    pub fn ribbon(&self) -> &RibbonStructure {
        &self.ribbon
    }

    pub fn a_lengths(&self) -> &[f64] {
        &self.a
    }

    pub fn into_parts(self) -> (RibbonStructure, Vec<f64>) {
        (self.ribbon, self.a)
    }

    pub fn length(&self, d: Dart) -> f64 {
        self.a[d.arc()]
    }

    pub fn s_lengths(&self) -> Vec<f64> {
        self.a.iter().map(|&a| s_length(a)).collect()
    }

    pub fn t_lengths(&self) -> Vec<f64> {
        self.a.iter().map(|&a| transverse(a)).collect()
    }

    /// The hexagon containing `d` as an arc side, as `(d, σ0 d, σ0² d)`.
    pub fn hexagon(&self, d: Dart) -> [Dart; 3] {
        let d1 = self.ribbon.sigma0(d);
        [d, d1, self.ribbon.sigma0(d1)]
    }

    /// Oriented width of every dart by the closed hexagon formula.
    pub fn oriented_widths(&self) -> Vec<f64> {
        let half_sinh: Vec<f64> = self.a.iter().map(|&a| (0.5 * a).sinh()).collect();
        self.ribbon
            .darts()
            .map(|d| {
                let [_, next, prev] = self.hexagon(d);
                oriented_width_from_half_sinh(
                    half_sinh[d.arc()],
                    half_sinh[next.arc()],
                    half_sinh[prev.arc()],
                )
            })
            .collect()
    }

    /// Boundary side from the endpoint of each dart to the next endpoint
    /// along its circle.
    pub fn gaps(&self) -> Vec<f64> {
        self.ribbon
            .darts()
            .map(|d| {
                let [_, next, prev] = self.hexagon(d);
                boundary_segment_unchecked(self.length(prev), self.length(d), self.length(next))
            })
            .collect()
    }

    pub fn all_widths(&self) -> Widths {
        Widths::from_darts(self.oriented_widths())
    }

    /// Per-arc widths only.
    pub fn widths(&self) -> Vec<f64> {
        self.all_widths().per_arc
    }

    /// Boundary circumferences `p_k`, by summing gaps.
    pub fn boundary_lengths(&self) -> Vec<f64> {
        let gaps = self.gaps();
        let mut p = vec![0.0; self.ribbon.signature().n_boundary()];
        for d in self.ribbon.darts() {
            p[self.ribbon.circle_of(d)] += gaps[d.index()];
        }
        p
    }

    pub fn total_boundary_length(&self) -> f64 {
        self.gaps().iter().sum()
    }

    /// Lays out every boundary circle and cross-checks the two width
    /// formulas at every dart.
    pub fn boundary_layout(&self) -> Result<BoundaryLayout, SurfaceError> {
        let gaps = self.gaps();
        let direct = self.oriented_widths();
        for d in self.ribbon.darts() {
            let [_, next, prev] = self.hexagon(d);
            let from_segments =
                oriented_width_from_segments(gaps[d.index()], gaps[prev.index()], gaps[next.index()]);
            let scale = gaps[d.index()].max(gaps[prev.index()]).max(1.0);
            if !((from_segments - direct[d.index()]).abs() <= CONVENTION_TOLERANCE * scale) {
                return Err(SurfaceError::ConventionMismatch {
                    dart: d.index(),
                    direct: direct[d.index()],
                    from_segments,
                });
            }
        }
        Ok(BoundaryLayout::new(&self.ribbon, &gaps))
    }

    /// Decorated-limit chart: `λ_α = tan(θ/2) e^{a_α/2}` with `sin θ = Σ p_k`.
    pub fn lambda_lengths(&self) -> Result<DecoratedStructure, SurfaceError> {
        let p = self.boundary_lengths();
        let total: f64 = p.iter().sum();
        if total > 1.0 {
            return Err(SurfaceError::BoundaryTooLong(total));
        }
        let tan_half = half_angle_tangent(total);
        let lambda = self
            .a
            .iter()
            .map(|&a| tan_half * (0.5 * a).exp())
            .collect();
        let p_weights = p.iter().map(|&x| x / total).collect();
        DecoratedStructure::new(self.ribbon.clone(), lambda, p_weights)
    }

    /// Widths rescaled by `2 / sin θ`, `sin θ = Σ p_k ≤ 1`.
    pub fn normalized_widths(&self) -> Result<Widths, SurfaceError> {
        let total = self.total_boundary_length();
        if total > 1.0 {
            return Err(SurfaceError::BoundaryTooLong(total));
        }
        let scale = 2.0 / total;
        Ok(Widths::from_darts(
            self.oriented_widths().into_iter().map(|w| scale * w).collect(),
        ))
    }
}

/// `tan(θ/2)` for `sin θ = x ∈ [0, 1]`, `θ ∈ [0, π/2]`.
fn half_angle_tangent(x: f64) -> f64 {
    x / (1.0 + (1.0 - x * x).max(0.0).sqrt())
}

/// One boundary circle: its darts in positive order starting from the
/// smallest, gaps between consecutive endpoints and partial sums.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleLayout {
    pub circle: usize,
    pub darts: Vec<Dart>,
    /// `gaps[m]` runs from the endpoint of `darts[m]` to that of `darts[m + 1]`.
    pub gaps: Vec<f64>,
    /// Distance from the endpoint of `darts[0]` to that of `darts[m]`.
    pub offsets: Vec<f64>,
    pub circumference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryLayout {
    pub circles: Vec<CircleLayout>,
    /// `(circle, position)` of each dart's endpoint.
    location: Vec<(usize, usize)>,
}

impl BoundaryLayout {
    fn new(ribbon: &RibbonStructure, gaps: &[f64]) -> Self {
        let mut location = vec![(0, 0); ribbon.n_darts()];
        let circles = (0..ribbon.signature().n_boundary())
            .map(|circle| {
                let darts = ribbon.boundary_cycle(circle);
                let gaps: Vec<f64> = darts.iter().map(|d| gaps[d.index()]).collect();
                let mut offsets = Vec::with_capacity(darts.len());
                let mut acc = 0.0;
                for (m, d) in darts.iter().enumerate() {
                    location[d.index()] = (circle, m);
                    offsets.push(acc);
                    acc += gaps[m];
                }
                CircleLayout {
                    circle,
                    darts,
                    gaps,
                    offsets,
                    circumference: acc,
                }
            })
            .collect();
        Self { circles, location }
    }

    pub fn circumferences(&self) -> Vec<f64> {
        self.circles.iter().map(|c| c.circumference).collect()
    }

    pub fn total_length(&self) -> f64 {
        self.circles.iter().map(|c| c.circumference).sum()
    }

    /// Circle and position along it of the endpoint of `d`.
    pub fn locate(&self, d: Dart) -> (usize, usize) {
        self.location[d.index()]
    }

    /// Length of the boundary path from the endpoint of `from` to the
    /// endpoint of `to`, in the positive direction.
    pub fn boundary_distance(&self, from: Dart, to: Dart) -> Result<f64, SurfaceError> {
        let (ci, i) = self.location[from.index()];
        let (cj, j) = self.location[to.index()];
        if ci != cj {
            return Err(SurfaceError::DifferentCircles {
                from: from.index(),
                to: to.index(),
            });
        }
        let c = &self.circles[ci];
        Ok(if j >= i {
            c.offsets[j] - c.offsets[i]
        } else {
            c.circumference - (c.offsets[i] - c.offsets[j])
        })
    }
}

/// A cusped surface with a projective decoration, in λ-lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoratedStructure {
    ribbon: RibbonStructure,
    lambda: Vec<f64>,
    p_weights: Vec<f64>,
}

/// Penner's simplicial coordinates per dart and per arc.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplicialCoordinates {
    pub per_dart: Vec<f64>,
    pub per_arc: Vec<f64>,
}

impl DecoratedStructure {
    pub fn new(
        ribbon: RibbonStructure,
        lambda: Vec<f64>,
        p_weights: Vec<f64>,
    ) -> Result<Self, SurfaceError> {
        if !ribbon.is_maximal() {
            return Err(SurfaceError::NotMaximal);
        }
        check_lengths(ribbon.n_arcs(), &lambda)?;
        let sum: f64 = p_weights.iter().sum();
        if p_weights.len() != ribbon.signature().n_boundary()
            || p_weights.iter().any(|&p| !(p >= 0.0))
            || (sum - 1.0).abs() > 1e-9
        {
            return Err(SurfaceError::InvalidDecoration);
        }
        Ok(Self {
            ribbon,
            lambda,
            p_weights,
        })
    }

    pub fn ribbon(&self) -> &RibbonStructure {
        &self.ribbon
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn p_weights(&self) -> &[f64] {
        &self.p_weights
    }

    /// `2 log λ`, the horoball-truncated lengths.
    pub fn reduced_lengths(&self) -> Vec<f64> {
        self.lambda.iter().map(|&l| 2.0 * l.ln()).collect()
    }

    /// `X(→α) = (λ_i² + λ_j² − λ_α²) / (λ_i λ_j λ_α)` where `→α, →α_i, →α_j`
    /// bound a triangle.
    pub fn simplicial_coordinates(&self) -> SimplicialCoordinates {
        let per_dart: Vec<f64> = self
            .ribbon
            .darts()
            .map(|d| {
                let next = self.ribbon.sigma0(d);
                let prev = self.ribbon.sigma0(next);
                let (l, li, lj) = (
                    self.lambda[d.arc()],
                    self.lambda[next.arc()],
                    self.lambda[prev.arc()],
                );
                (li * li + lj * lj - l * l) / (li * lj * l)
            })
            .collect();
        let per_arc = per_dart.chunks_exact(2).map(|p| p[0] + p[1]).collect();
        SimplicialCoordinates { per_dart, per_arc }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{one_holed_torus, pair_of_pants, random_lengths, random_maximal_ribbon, random_relabeling, random_signature};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn symmetric_torus() -> MaximalCoordinates {
        let a = 2.0 * 1f64.asinh();
        MaximalCoordinates::new(one_holed_torus(), vec![a; 3]).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            MaximalCoordinates::new(one_holed_torus(), vec![1.0; 2]),
            Err(SurfaceError::LengthCount { expected: 3, got: 2 })
        );
        assert!(matches!(
            MaximalCoordinates::new(one_holed_torus(), vec![1.0, 0.0, 1.0]),
            Err(SurfaceError::NonPositiveLength { arc: 1, .. })
        ));
        let (sub, _) = one_holed_torus().restrict(&[0, 1]).unwrap();
        assert_eq!(MaximalCoordinates::new(sub, vec![1.0; 2]), Err(SurfaceError::NotMaximal));
    }

    #[test]
    fn symmetric_torus_layout() {
        let m = symmetric_torus();
        let layout = m.boundary_layout().unwrap();
        assert_eq!(layout.circles.len(), 1);
        // 12 arcsinh(1/2), mpmath: 5.774541900715241369...
        assert_relative_eq!(layout.circles[0].circumference, 5.774_541_900_715_241_4, epsilon = 1e-13);
        for w in m.widths() {
            assert_relative_eq!(w, 0.962_423_650_119_206_9, epsilon = 1e-14);
        }
        let p = layout.circles[0].circumference;
        let darts = &layout.circles[0].darts;
        for k in 0..6 {
            let d = layout.boundary_distance(darts[k], darts[(k + 1) % 6]).unwrap();
            assert_relative_eq!(d, p / 6.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn boundary_distance_edge_cases() {
        let m = MaximalCoordinates::new(pair_of_pants(), vec![0.5, 1.0, 2.0]).unwrap();
        let layout = m.boundary_layout().unwrap();
        assert_eq!(layout.boundary_distance(Dart(0), Dart(0)).unwrap(), 0.0);
        // dart 0 ends on circle 1, dart 1 on circle 0
        assert!(matches!(
            layout.boundary_distance(Dart(0), Dart(1)),
            Err(SurfaceError::DifferentCircles { .. })
        ));
        let p1 = layout.circles[1].circumference;
        let there = layout.boundary_distance(Dart(0), Dart(3)).unwrap();
        let back = layout.boundary_distance(Dart(3), Dart(0)).unwrap();
        assert_relative_eq!(there + back, p1, epsilon = 1e-14);
    }

    #[test]
    fn chart_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = random_maximal_ribbon(&mut rng, crate::ribbon::SurfaceSignature::new(1, 2).unwrap());
        let a = random_lengths(&mut rng, r.n_arcs(), 0.05, 20.0);
        let m = MaximalCoordinates::new(r.clone(), a.clone()).unwrap();
        let via_t = MaximalCoordinates::from_t_lengths(r.clone(), &m.t_lengths()).unwrap();
        let via_s = MaximalCoordinates::from_s_lengths(r, &m.s_lengths()).unwrap();
        for k in 0..a.len() {
            assert!((via_t.a_lengths()[k] - a[k]).abs() <= 1e-12 * a[k].max(1.0));
            assert!((via_s.a_lengths()[k] - a[k]).abs() <= 1e-12 * a[k].max(1.0));
        }
    }

    #[test]
    fn boundary_identities_on_random_surfaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let sig = random_signature(&mut rng, 3, 4);
            let r = random_maximal_ribbon(&mut rng, sig);
            let a = random_lengths(&mut rng, r.n_arcs(), 0.1, 5.0);
            let m = MaximalCoordinates::new(r.clone(), a).unwrap();
            let layout = m.boundary_layout().unwrap();
            let w = m.all_widths();
            let total = layout.total_length();
            assert!((total - 2.0 * w.total()).abs() <= 1e-9 * total);
            for c in &layout.circles {
                let from_widths: f64 = c.darts.iter().map(|d| w.per_arc[d.arc()]).sum();
                assert!((c.circumference - from_widths).abs() <= 1e-9 * c.circumference);
            }
        }
    }

    #[test]
    fn relabeling_keeps_boundary_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let r = random_maximal_ribbon(&mut rng, crate::ribbon::SurfaceSignature::new(1, 3).unwrap());
        let a = random_lengths(&mut rng, r.n_arcs(), 0.3, 3.0);
        let (perm, rev) = random_relabeling(&mut rng, r.n_arcs());
        let s = r.relabel(&perm, &rev).unwrap();
        let mut b = vec![0.0; a.len()];
        for k in 0..a.len() {
            b[perm[k]] = a[k];
        }
        let p1 = MaximalCoordinates::new(r, a).unwrap().boundary_lengths();
        let p2 = MaximalCoordinates::new(s, b).unwrap().boundary_lengths();
        for (x, y) in p1.iter().zip(&p2) {
            assert_relative_eq!(x, y, max_relative = 1e-13);
        }
    }

    #[test]
    fn negative_width_is_reported_with_sign() {
        // one long arc against two short ones makes both its oriented widths negative
        let m = MaximalCoordinates::new(one_holed_torus(), vec![4.0, 0.5, 0.5]).unwrap();
        let w = m.all_widths();
        assert!(w.per_dart[0] < 0.0 && w.per_dart[1] < 0.0);
        assert!(w.per_arc[0] < 0.0);
        assert!(w.per_arc[1] > 0.0);
    }

    #[test]
    fn lambda_lengths_need_short_boundary() {
        let m = symmetric_torus();
        assert!(matches!(m.lambda_lengths(), Err(SurfaceError::BoundaryTooLong(_))));
        let long = MaximalCoordinates::new(one_holed_torus(), vec![16.0, 17.0, 18.0]).unwrap();
        assert!(long.total_boundary_length() < 1.0);
        let d = long.lambda_lengths().unwrap();
        assert_relative_eq!(d.p_weights()[0], 1.0);
        // monotone in a at fixed boundary
        assert!(d.lambda()[0] < d.lambda()[1] && d.lambda()[1] < d.lambda()[2]);
    }

    #[test]
    fn simplicial_coordinate_examples() {
        let torus = one_holed_torus();
        let d = DecoratedStructure::new(torus.clone(), vec![1.0; 3], vec![1.0]).unwrap();
        for x in d.simplicial_coordinates().per_dart {
            assert_relative_eq!(x, 1.0, epsilon = 1e-15);
        }
        // λ_0² = λ_1² + λ_2²
        let d = DecoratedStructure::new(torus, vec![5f64.sqrt(), 1.0, 2.0], vec![1.0]).unwrap();
        let x = d.simplicial_coordinates();
        assert!(x.per_dart[0].abs() < 1e-15 && x.per_dart[1].abs() < 1e-15);
    }

    #[test]
    fn decoration_is_validated() {
        assert_eq!(
            DecoratedStructure::new(pair_of_pants(), vec![1.0; 3], vec![0.5, 0.6, -0.1]),
            Err(SurfaceError::InvalidDecoration)
        );
    }
}
