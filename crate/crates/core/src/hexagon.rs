//! Right-angled hexagon trigonometry: s-lengths, t-lengths, boundary sides and
//! oriented widths.
//!
//! A right-angled hexagon cut out by a maximal arc system has three arc sides
//! of lengths `a_i, a_j, a_k` alternating with three boundary sides. The
//! boundary side opposite to `a_i` has length `d_i` with
//!
//! ```text
//! cosh d_i = (cosh a_j cosh a_k + cosh a_i) / (sinh a_j sinh a_k)
//! ```
//!
//! and the oriented width of `α_i` in the hexagon is
//!
//! ```text
//! sinh w_i = (s_j² + s_k² − s_i²) / (2 s_j s_k √(s_i² − 1)),   s = cosh(a/2)
//! w_i = ½ (d_j + d_k − d_i)
//! ```
//!
//! The two width expressions are computed independently and checked against
//! each other elsewhere; they must agree to rounding.

use thiserror::Error;

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum HexError {
    #[error("length must be positive and finite, got {0}")]
    NonPositiveLength(f64),
    #[error("degenerate hexagon: arc side of zero length")]
    DegenerateHexagon,
}

fn check_length(a: f64) -> Result<f64, HexError> {
    if a > 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(HexError::NonPositiveLength(a))
    }
}

/// `cosh(a/2)`.
#[inline]
pub fn s_length(a: f64) -> f64 {
    (0.5 * a).cosh()
}

/// Inverse of [`s_length`] on `s ≥ 1`.
#[inline]
pub fn a_from_s(s: f64) -> f64 {
    2.0 * acosh_guarded(s)
}

/// `T(x) = 2 arcsinh(1 / sinh(x/2))`, an involution of `(0, ∞)`.
#[inline]
pub(crate) fn transverse(a: f64) -> f64 {
    2.0 * (1.0 / (0.5 * a).sinh()).asinh()
}

/// The t-length `T(a)` of an arc of length `a`.
pub fn t_length(a: f64) -> Result<f64, HexError> {
    check_length(a).map(transverse)
}

/// `arccosh(x)` as `log(x + √(x² − 1))`; arguments within `1e-12` below 1
/// are treated as 1.
pub fn acosh_guarded(x: f64) -> f64 {
    let x = if x < 1.0 && x >= 1.0 - 1e-12 { 1.0 } else { x };
    if x > 1e150 {
        return x.ln() + std::f64::consts::LN_2;
    }
    (x + (x * x - 1.0).sqrt()).ln()
}

/// `arccosh(1 + x)` for `x ≥ 0`, accurate when `x` is tiny or huge.
pub fn acosh_one_plus(x: f64) -> f64 {
    let x = x.max(0.0);
    if x > 1e100 {
        x.ln() + (1.0 / x + (1.0 + 2.0 / x).sqrt()).ln_1p()
    } else {
        (x + (x * (x + 2.0)).sqrt()).ln_1p()
    }
}

/// Boundary side between the feet of `adjacent1` and `adjacent2`, opposite to
/// the arc side `opposite`. Uses `cosh a' cosh a'' − sinh a' sinh a'' = cosh(a' − a'')`
/// to evaluate `cosh d − 1` without cancellation.
#[inline]
pub(crate) fn boundary_segment_unchecked(opposite: f64, adjacent1: f64, adjacent2: f64) -> f64 {
    let excess = ((adjacent1 - adjacent2).cosh() + opposite.cosh())
        / (adjacent1.sinh() * adjacent2.sinh());
    acosh_one_plus(excess)
}

pub fn hexagon_boundary_segment(
    opposite: f64,
    adjacent1: f64,
    adjacent2: f64,
) -> Result<f64, HexError> {
    check_length(opposite)?;
    check_length(adjacent1)?;
    check_length(adjacent2)?;
    Ok(boundary_segment_unchecked(opposite, adjacent1, adjacent2))
}

/// Oriented width from half-length sines `sh = sinh(a/2)`, so that
/// `s² = 1 + sh²` and `√(s² − 1) = sh` stay accurate for tiny arcs.
#[inline]
pub(crate) fn oriented_width_from_half_sinh(sh_i: f64, sh_j: f64, sh_k: f64) -> f64 {
    let num = 1.0 + sh_j * sh_j + sh_k * sh_k - sh_i * sh_i;
    let den = 2.0 * sh_j.hypot(1.0) * sh_k.hypot(1.0) * sh_i;
    (num / den).asinh()
}

/// `½ (d_after + d_before − d_opposite)`: the oriented width of an arc from the
/// two boundary sides adjacent to it and the boundary side opposite to it.
#[inline]
pub fn oriented_width_from_segments(adjacent_after: f64, adjacent_before: f64, opposite: f64) -> f64 {
    0.5 * (adjacent_after + adjacent_before - opposite)
}

/// Which arc side of a [`HexTriple`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    I,
    J,
    K,
}

impl Side {
    fn index(self) -> usize {
        match self {
            Side::I => 0,
            Side::J => 1,
            Side::K => 2,
        }
    }
}

/// Lengths of the three arc sides of a right-angled hexagon, in cyclic order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HexTriple {
    a: [f64; 3],
}

impl HexTriple {
    pub fn new(a_i: f64, a_j: f64, a_k: f64) -> Result<Self, HexError> {
        Ok(Self {
            a: [check_length(a_i)?, check_length(a_j)?, check_length(a_k)?],
        })
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.a
    }

    /// Boundary sides; entry `m` is the side opposite to arc side `m`.
    pub fn boundary_segments(&self) -> [f64; 3] {
        let [a0, a1, a2] = self.a;
        [
            boundary_segment_unchecked(a0, a1, a2),
            boundary_segment_unchecked(a1, a2, a0),
            boundary_segment_unchecked(a2, a0, a1),
        ]
    }

    /// Oriented widths by the closed formula.
    pub fn oriented_widths(&self) -> [f64; 3] {
        let sh = self.a.map(|a| (0.5 * a).sinh());
        [
            oriented_width_from_half_sinh(sh[0], sh[1], sh[2]),
            oriented_width_from_half_sinh(sh[1], sh[2], sh[0]),
            oriented_width_from_half_sinh(sh[2], sh[0], sh[1]),
        ]
    }

    /// Oriented widths recomputed from the boundary sides.
    pub fn oriented_widths_from_segments(&self) -> [f64; 3] {
        let d = self.boundary_segments();
        [
            oriented_width_from_segments(d[1], d[2], d[0]),
            oriented_width_from_segments(d[2], d[0], d[1]),
            oriented_width_from_segments(d[0], d[1], d[2]),
        ]
    }
}

/// `w(→α)` for the arc side `which`; may be negative.
pub fn oriented_width_direct(hex: &HexTriple, which: Side) -> Result<f64, HexError> {
    let i = which.index();
    let a = hex.a;
    let (ai, aj, ak) = (a[i], a[(i + 1) % 3], a[(i + 2) % 3]);
    let sh_i = (0.5 * ai).sinh();
    if sh_i == 0.0 {
        return Err(HexError::DegenerateHexagon);
    }
    Ok(oriented_width_from_half_sinh(
        sh_i,
        (0.5 * aj).sinh(),
        (0.5 * ak).sinh(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn t_length_fixed_point() {
        let a = 2.0 * 1f64.asinh();
        assert_relative_eq!(t_length(a).unwrap(), a, epsilon = 1e-14);
        assert_relative_eq!(a, 1.762_747_174_039_086, epsilon = 1e-14);
    }

    #[test]
    fn t_length_involution_and_asymptote() {
        let t = t_length(1.0).unwrap();
        assert!((t_length(t).unwrap() - 1.0).abs() <= 1e-12);
        // high-precision reference: 0.02695219587721325...
        let t10 = t_length(10.0).unwrap();
        assert_relative_eq!(t10, 0.026_952_195_877_213_253, max_relative = 1e-13);
        // T(x) ≈ 4 e^{-x/2}
        assert!((t10 / (4.0 * (-5f64).exp()) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn t_length_rejects_nonpositive() {
        assert_eq!(t_length(0.0), Err(HexError::NonPositiveLength(0.0)));
        assert!(t_length(-1.0).is_err());
        assert!(t_length(f64::NAN).is_err());
    }

    #[test]
    fn symmetric_segment_equals_side() {
        let a = 2f64.acosh();
        let d = hexagon_boundary_segment(a, a, a).unwrap();
        assert_relative_eq!(d, 1.316_957_896_924_816_7, epsilon = 1e-14);
        assert_relative_eq!(d, a, epsilon = 1e-14);
    }

    #[test]
    fn segment_one_two_three() {
        // mpmath, 30 digits: arccosh(1.084939983220505672...) = 0.409301920927792175...
        let d = hexagon_boundary_segment(1.0, 2.0, 3.0).unwrap();
        assert_relative_eq!(d, 0.409_301_920_927_792_18, epsilon = 1e-14);
        let naive = acosh_guarded((2f64.cosh() * 3f64.cosh() + 1f64.cosh()) / (2f64.sinh() * 3f64.sinh()));
        assert_relative_eq!(d, naive, epsilon = 1e-13);
    }

    #[test]
    fn segment_continuous_as_opposite_shrinks() {
        let a1 = 1.3;
        let mut prev = f64::INFINITY;
        for k in 1..12 {
            let a = 10f64.powi(-k);
            let d = hexagon_boundary_segment(a, a1, a1).unwrap();
            assert!(d <= prev);
            prev = d;
        }
        let limit = acosh_guarded((a1.cosh().powi(2) + 1.0) / a1.sinh().powi(2));
        assert!((prev - limit).abs() < 1e-9);
        assert!(hexagon_boundary_segment(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn symmetric_width() {
        let a = 2.0 * 1f64.asinh();
        let hex = HexTriple::new(a, a, a).unwrap();
        let w = oriented_width_direct(&hex, Side::I).unwrap();
        assert_relative_eq!(w, 0.5f64.asinh(), epsilon = 1e-15);
        assert_relative_eq!(w, 0.481_211_825_059_603_45, epsilon = 1e-15);
    }

    #[test]
    fn width_vanishes_on_pythagorean_triple() {
        // s_i² = s_j² + s_k²: pick s_j² = 2, s_k² = 3, s_i² = 5
        let a_of = |s2: f64| a_from_s(s2.sqrt());
        let hex = HexTriple::new(a_of(5.0), a_of(2.0), a_of(3.0)).unwrap();
        assert!(oriented_width_direct(&hex, Side::I).unwrap().abs() < 1e-15);
    }

    #[test]
    fn width_from_equal_and_given_segments() {
        assert_eq!(oriented_width_from_segments(0.7, 0.7, 0.7), 0.35);
        assert_relative_eq!(oriented_width_from_segments(0.3, 0.5, 0.2), 0.3, epsilon = 1e-16);
    }

    #[test]
    fn guarded_acosh_snaps_roundoff() {
        assert_eq!(acosh_guarded(1.0 - 1e-13), 0.0);
        assert!(acosh_guarded(1.0 - 1e-6).is_nan());
        assert_relative_eq!(acosh_guarded(2.0), 2f64.acosh(), epsilon = 1e-15);
        assert_relative_eq!(acosh_one_plus(1.0), 2f64.acosh(), epsilon = 1e-15);
        assert_relative_eq!(acosh_one_plus(1e200), (2e200f64).ln(), max_relative = 1e-15);
    }

    fn side() -> impl Strategy<Value = f64> {
        0.05f64..20.0
    }

    proptest! {
        #[test]
        fn two_way_widths_agree(a in side(), b in side(), c in side()) {
            let hex = HexTriple::new(a, b, c).unwrap();
            let direct = hex.oriented_widths();
            let via_segments = hex.oriented_widths_from_segments();
            for m in 0..3 {
                prop_assert!((direct[m] - via_segments[m]).abs() <= 1e-10,
                    "{:?}: {} vs {}", hex, direct[m], via_segments[m]);
            }
        }

        #[test]
        fn segments_are_sums_of_widths(a in side(), b in side(), c in side()) {
            let hex = HexTriple::new(a, b, c).unwrap();
            let w = hex.oriented_widths();
            let d = hex.boundary_segments();
            // the side opposite to arc m joins the other two arcs
            for m in 0..3 {
                prop_assert!((d[m] - w[(m + 1) % 3] - w[(m + 2) % 3]).abs() <= 1e-9 * d[m].max(1.0));
            }
        }

        #[test]
        fn spinal_width_at_most_half_t_length(a in side(), b in side(), c in side()) {
            let hex = HexTriple::new(a, b, c).unwrap();
            let w = hex.oriented_widths();
            // the bound needs the spine vertex inside the hexagon
            prop_assume!(w[1] >= 0.0 && w[2] >= 0.0);
            prop_assert!(w[0] <= 0.5 * t_length(a).unwrap() * (1.0 + 1e-12));
        }

        #[test]
        fn shortest_side_has_positive_width(a in side(), b in side(), c in side()) {
            let hex = HexTriple::new(a.min(b).min(c), a, b.max(c)).unwrap();
            prop_assert!(oriented_width_direct(&hex, Side::I).unwrap() > 0.0);
        }

        #[test]
        fn t_is_involutive_and_decreasing(x in 1e-3f64..30.0, dx in 1e-3f64..1.0) {
            let t = t_length(x).unwrap();
            prop_assert!((t_length(t).unwrap() - x).abs() <= 1e-12 * x.max(1.0));
            prop_assert!(t_length(x + dx).unwrap() < t);
        }

        #[test]
        fn width_decreasing_in_own_side(a in 0.05f64..10.0, da in 1e-3f64..1.0, b in side(), c in side()) {
            let w0 = oriented_width_direct(&HexTriple::new(a, b, c).unwrap(), Side::I).unwrap();
            let w1 = oriented_width_direct(&HexTriple::new(a + da, b, c).unwrap(), Side::I).unwrap();
            prop_assert!(w1 < w0);
        }
    }
}
