//! The hyperbolic plane in the hyperboloid model, with conversion of
//! geodesics to the upper half-plane.
//!
//! Points and normals live in ℝ^{2,1} with form `x₁y₁ + x₂y₂ − x₃y₃`. A
//! geodesic is stored by a unit spacelike normal `n`; it is the set of points
//! `P` with `⟨P, n⟩ = 0`. Two ultraparallel geodesics are at distance
//! `arccosh |⟨n, n'⟩|`.

use thiserror::Error;

use crate::hexagon::{acosh_guarded, HexTriple};

pub type Vec3 = [f64; 3];

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum PlaneError {
    #[error("hexagon fails to close: error {error:.3e} exceeds {tolerance:.3e}")]
    NumericalClosureFailure { error: f64, tolerance: f64 },
    #[error("geodesics are not ultraparallel")]
    NotUltraparallel,
}

pub fn minkowski(x: &Vec3, y: &Vec3) -> f64 {
    x[0] * y[0] + x[1] * y[1] - x[2] * y[2]
}

/// Minkowski cross product: orthogonal to both factors.
fn minkowski_cross(x: &Vec3, y: &Vec3) -> Vec3 {
    [
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        -(x[0] * y[1] - x[1] * y[0]),
    ]
}

fn scaled_sum(a: f64, x: &Vec3, b: f64, y: &Vec3) -> Vec3 {
    [a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]]
}

fn neg(x: &Vec3) -> Vec3 {
    [-x[0], -x[1], -x[2]]
}

/// Unit tangent `t`, unit left normal `n` and base point `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub t: Vec3,
    pub n: Vec3,
    pub p: Vec3,
}

impl Frame {
    pub fn origin() -> Self {
        Self {
            t: [1.0, 0.0, 0.0],
            n: [0.0, 1.0, 0.0],
            p: [0.0, 0.0, 1.0],
        }
    }

    /// Moves a distance `len` along the current geodesic.
    pub fn advance(&self, len: f64) -> Self {
        let (c, s) = (len.cosh(), len.sinh());
        Self {
            t: scaled_sum(c, &self.t, s, &self.p),
            n: self.n,
            p: scaled_sum(s, &self.t, c, &self.p),
        }
    }

    /// Turns by a right angle to the left.
    pub fn turn_left(&self) -> Self {
        Self {
            t: self.n,
            n: neg(&self.t),
            p: self.p,
        }
    }

    /// Faces the other way, keeping the left normal on the left.
    pub fn reversed(&self) -> Self {
        Self {
            t: neg(&self.t),
            n: neg(&self.n),
            p: self.p,
        }
    }

    /// The geodesic through the base point along the tangent.
    pub fn geodesic(&self) -> Geodesic {
        Geodesic { normal: self.n }
    }

    fn max_entry(&self) -> f64 {
        self.t
            .iter()
            .chain(&self.n)
            .chain(&self.p)
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    fn distance_to(&self, other: &Self) -> f64 {
        self.t
            .iter()
            .chain(&self.n)
            .chain(&self.p)
            .zip(other.t.iter().chain(&other.n).chain(&other.p))
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geodesic {
    pub normal: Vec3,
}

impl Geodesic {
    /// Distance to an ultraparallel geodesic. Near zero the cross product
    /// gives `sinh d` with less cancellation than `cosh d`.
    pub fn distance(&self, other: &Self) -> Result<f64, PlaneError> {
        let c = minkowski(&self.normal, &other.normal).abs();
        if c < 1.0 - 1e-12 {
            return Err(PlaneError::NotUltraparallel);
        }
        if c < 1.5 {
            let x = minkowski_cross(&self.normal, &other.normal);
            // ⟨n × n', n × n'⟩ = ⟨n, n'⟩² − 1
            let sinh2 = minkowski(&x, &x);
            Ok(sinh2.max(0.0).sqrt().asinh())
        } else {
            Ok(acosh_guarded(c))
        }
    }

    /// Endpoints in the upper half-plane, reached through the Poincaré disc
    /// and the Cayley map `z ↦ i(1 + z)/(1 − z)`. The point `z = 1` maps to
    /// `f64::INFINITY`.
    pub fn half_plane_endpoints(&self) -> (f64, f64) {
        let n = &self.normal;
        // a timelike point on the geodesic, and a unit tangent there
        let foot = [n[0] * n[2], n[1] * n[2], 1.0 + n[2] * n[2]];
        let scale = (-minkowski(&foot, &foot)).sqrt();
        let p = [foot[0] / scale, foot[1] / scale, foot[2] / scale];
        let t = minkowski_cross(n, &p);
        let tn = minkowski(&t, &t).sqrt();
        let t = [t[0] / tn, t[1] / tn, t[2] / tn];
        let to_real = |v: Vec3| -> f64 {
            let phi = v[1].atan2(v[0]);
            if phi == 0.0 {
                f64::INFINITY
            } else {
                -1.0 / (0.5 * phi).tan()
            }
        };
        (
            to_real(scaled_sum(1.0, &p, 1.0, &t)),
            to_real(scaled_sum(1.0, &p, -1.0, &t)),
        )
    }
}

/// Distance between the geodesics `(x1, y1)` and `(x2, y2)` of the upper
/// half-plane from the cross-ratio `r = (x1−x2)(y1−y2) / ((x1−y2)(y1−x2))`:
/// `cosh d = (1 + r) / |1 − r|`. An endpoint at infinity drops its factors.
pub fn half_plane_distance(g1: (f64, f64), g2: (f64, f64)) -> f64 {
    let (x1, y1) = g1;
    let (x2, y2) = g2;
    let factor = |u: f64, v: f64| if u.is_infinite() || v.is_infinite() { 1.0 } else { u - v };
    let r = factor(x1, x2) * factor(y1, y2) / (factor(x1, y2) * factor(y1, x2));
    acosh_guarded((1.0 + r) / (1.0 - r).abs())
}

/// The six sides of a right-angled hexagon laid out counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizedHexagon {
    pub sides: [Geodesic; 6],
    pub lengths: [f64; 6],
    /// Frame at the start of each side.
    pub frames: [Frame; 6],
    pub closure_error: f64,
}

/// Walks the polygon with the given side lengths, turning left by a right
/// angle after each side. Returns the side geodesics, starting frames and
/// the mismatch between the final and initial frames.
pub fn walk_polygon(start: Frame, lengths: &[f64]) -> (Vec<Geodesic>, Vec<Frame>, f64, f64) {
    let mut frame = start;
    let mut sides = Vec::with_capacity(lengths.len());
    let mut frames = Vec::with_capacity(lengths.len());
    let mut size = start.max_entry();
    for &len in lengths {
        sides.push(frame.geodesic());
        frames.push(frame);
        frame = frame.advance(len);
        size = size.max(frame.max_entry());
        frame = frame.turn_left();
    }
    (sides, frames, frame.distance_to(&start), size)
}

/// Closure tolerance for a walk whose frames reach entries of size `size`.
/// Rounding grows like `ε · size²` times the conditioning of the six boosts,
/// which adds a few more digits on thin hexagons.
pub fn closure_tolerance(size: f64) -> f64 {
    1e-10 * (1.0 + size * size)
}

/// Realizes a hexagon with arc sides `(a_i, a_j, a_k)` in that cyclic order,
/// sides listed as `(a_i, d_k, a_j, d_i, a_k, d_j)`.
pub fn realize_hexagon(hex: &HexTriple) -> Result<RealizedHexagon, PlaneError> {
    realize_hexagon_from(hex, Frame::origin())
}

pub fn realize_hexagon_from(hex: &HexTriple, start: Frame) -> Result<RealizedHexagon, PlaneError> {
    let [ai, aj, ak] = hex.lengths();
    let [di, dj, dk] = hex.boundary_segments();
    let lengths = [ai, dk, aj, di, ak, dj];
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
