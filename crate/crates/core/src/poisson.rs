//! The Weil–Petersson Poisson structure in a-lengths, its normalized form
//! in projective widths, and the two combinatorial limits (Kontsevich and
//! Penner).

use nalgebra::DMatrix;
use thiserror::Error;

use crate::hexagon::{a_from_s, transverse};
use crate::newton::fd_jacobian;
use crate::ribbon::RibbonStructure;
use crate::surface::{DecoratedStructure, MaximalCoordinates, SurfaceError};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum PoissonError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("vertex of valence {0} in a graph that should be trivalent")]
    NotTrivalent(usize),
    #[error("width chart is singular at this point (|det| = {0:.3e})")]
    SingularJacobian(f64),
}

/// An antisymmetric matrix indexed by the arcs in `basis`: entry `(i, j)` is
/// the coefficient of `∂_i ∧ ∂_j` (or `dx_i ∧ dx_j` for forms), so that the
/// bracket is `{f, g} = ∇fᵀ M ∇g`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcBivector {
    pub basis: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

pub type PoissonBivector = ArcBivector;
pub type KontsevichBivector = ArcBivector;
pub type PennerForm = ArcBivector;

impl ArcBivector {
    fn from_matrix(matrix: DMatrix<f64>) -> Self {
        Self {
            basis: (0..matrix.nrows()).collect(),
            matrix,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |M + Mᵀ|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        (&self.matrix + self.matrix.transpose()).amax()
    }

    /// `max |M − N|`.
    pub fn deviation(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).amax()
    }

    /// The bivector in coordinates `y` with Jacobian `J = ∂y/∂x`: `J M Jᵀ`.
    pub fn push_forward(&self, jacobian: &DMatrix<f64>) -> Self {
        Self {
            basis: self.basis.clone(),
            matrix: jacobian * &self.matrix * jacobian.transpose(),
        }
    }

    pub fn bracket(&self, df: &[f64], dg: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += df[i] * self.matrix[(i, j)] * dg[j];
            }
        }
        s
    }

    /// `M ∇f`, the Hamiltonian vector field of `f` up to sign.
    pub fn contract(&self, df: &[f64]) -> Vec<f64> {
        let v = &self.matrix * nalgebra::DVector::from_column_slice(df);
        v.iter().copied().collect()
    }
}

/// `sinh(x − d) / sinh(x)` without overflow for large `x`.
fn sinh_ratio(x: f64, d: f64) -> f64 {
    ((-d).exp() - (d - 2.0 * x).exp()) / -(-2.0 * x).exp_m1()
}

/// `η = ¼ Σ_k Σ sinh(p_k/2 − d(y, y')) / sinh(p_k/2) ∂_{a(y)} ∧ ∂_{a(y')}`,
/// summed over ordered pairs of distinct arc endpoints `y, y'` on the same
/// circle, `d` measured in the positive direction from `y` to `y'`.
pub fn poisson_bivector(m: &MaximalCoordinates) -> Result<PoissonBivector, PoissonError> {
    let layout = m.boundary_layout()?;
    let n = m.ribbon().n_arcs();
    let mut c = DMatrix::<f64>::zeros(n, n);
    for circle in &layout.circles {
        let half = 0.5 * circle.circumference;
        for (u, du) in circle.darts.iter().enumerate() {
            for (v, dv) in circle.darts.iter().enumerate() {
                if u == v {
                    continue;
                }
                let d = if v > u {
                    circle.offsets[v] - circle.offsets[u]
                } else {
                    circle.circumference - (circle.offsets[u] - circle.offsets[v])
                };
                c[(du.arc(), dv.arc())] += 0.25 * sinh_ratio(half, d);
            }
        }
    }
    Ok(ArcBivector::from_matrix(&c - c.transpose()))
}

/// Default finite-difference step for gradients, relative to `max(1, a)`.
pub const GRADIENT_STEP: f64 = 1e-6;

/// `∂p_k/∂a_j` by central differences with `h_j = step · max(1, a_j)`.
pub fn boundary_gradients(m: &MaximalCoordinates, step: f64) -> DMatrix<f64> {
    let mut f = |a: &[f64]| {
        m.with_lengths(a.to_vec())
            .expect("perturbed lengths stay positive")
            .boundary_lengths()
    };
    fd_jacobian(&mut f, m.a_lengths(), step, 1.0)
}

/// `‖η ∇p_k‖_∞` for circle `k`.
pub fn casimir_residual(m: &MaximalCoordinates, k: usize) -> Result<f64, PoissonError> {
    casimir_residual_with_step(m, k, GRADIENT_STEP)
}

pub fn casimir_residual_with_step(m: &MaximalCoordinates, k: usize, step: f64) -> Result<f64, PoissonError> {
    let eta = poisson_bivector(m)?;
    let grad = boundary_gradients(m, step);
    let row: Vec<f64> = grad.row(k).iter().copied().collect();
    Ok(eta.contract(&row).iter().fold(0.0, |acc, x| acc.max(x.abs())))
}

/// `∂w_i/∂a_j` by central differences with `h_j = step · a_j`.
pub fn width_jacobian(m: &MaximalCoordinates, step: f64) -> DMatrix<f64> {
    let mut f = |a: &[f64]| {
        m.with_lengths(a.to_vec())
            .expect("perturbed lengths stay positive")
            .widths()
    };
    fd_jacobian(&mut f, m.a_lengths(), step, 0.0)
}

/// `η̃ = (1 + 𝓛/2)² η` in the projective widths `w̃ = w / (𝓛/2)`, where
/// `𝓛 = Σ_k p_k`.
pub fn normalized_bivector(m: &MaximalCoordinates) -> Result<PoissonBivector, PoissonError> {
    normalized_bivector_with_step(m, GRADIENT_STEP)
}

pub fn normalized_bivector_with_step(m: &MaximalCoordinates, step: f64) -> Result<PoissonBivector, PoissonError> {
    let eta = poisson_bivector(m)?;
    let jac = width_jacobian(m, step);
    let n = jac.nrows();
    // scale-free singularity test: determinant of the column-normalized matrix
    let mut normalized = jac.clone();
    for mut col in normalized.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    let det = normalized.determinant();
    if !(det.abs() > 1e-12) {
        return Err(PoissonError::SingularJacobian(det.abs()));
    }
    let w = m.widths();
    let total: f64 = 2.0 * w.iter().sum::<f64>();
    // ∂𝓛/∂a = 2 Σ_i ∂w_i/∂a
    let dtotal: Vec<f64> = (0..n).map(|j| 2.0 * jac.column(j).sum()).collect();
    let proj = DMatrix::from_fn(n, n, |i, j| {
        2.0 * jac[(i, j)] / total - 2.0 * w[i] * dtotal[j] / (total * total)
    });
    let scale = (1.0 + 0.5 * total).powi(2);
    let mut out = eta.push_forward(&proj);
    out.matrix *= scale;
    Ok(out)
}

/// `H̃`: for each trivalent vertex with cyclically ordered edges
/// `(r1, r2, r3)`, `+½` at `(r1, r2), (r2, r3), (r3, r1)` and `−½` at the
/// transposes. Vertices are the `σ0`-orbits.
pub fn kontsevich_bivector(ribbon: &RibbonStructure) -> Result<KontsevichBivector, PoissonError> {
    cyclic_triangle_matrix(ribbon, 0.5)
}

/// `π*ω₀ = −½ Σ_t (dã_{t1} ∧ dã_{t2} + dã_{t2} ∧ dã_{t3} + dã_{t3} ∧ dã_{t1})`
/// over the ideal triangles `t`.
pub fn penner_form(d: &DecoratedStructure) -> Result<PennerForm, PoissonError> {
    cyclic_triangle_matrix(d.ribbon(), -0.5)
}

fn cyclic_triangle_matrix(ribbon: &RibbonStructure, weight: f64) -> Result<ArcBivector, PoissonError> {
    let n = ribbon.n_arcs();
    let mut h = DMatrix::<f64>::zeros(n, n);
    for orbit in ribbon.sigma0_perm().orbits() {
        if orbit.len() != 3 {
            return Err(PoissonError::NotTrivalent(orbit.len()));
        }
        let r: Vec<usize> = orbit.iter().map(|d| d / 2).collect();
        for (x, y) in [(0, 1), (1, 2), (2, 0)] {
            h[(r[x], r[y])] += weight;
            h[(r[y], r[x])] -= weight;
        }
    }
    Ok(ArcBivector::from_matrix(h))
}

/// `η` in t-lengths, using the Jacobian of `a ↦ T(a)` by central differences.
pub fn to_t_coordinates(eta: &PoissonBivector, a: &[f64], step: f64) -> PoissonBivector {
    let mut f = |x: &[f64]| x.iter().map(|&v| transverse(v)).collect::<Vec<_>>();
    eta.push_forward(&fd_jacobian(&mut f, a, step, 0.0))
}

/// Inverse of [`to_t_coordinates`], using the Jacobian of `t ↦ T(t)` at `t`.
pub fn from_t_coordinates(eta_t: &PoissonBivector, t: &[f64], step: f64) -> PoissonBivector {
    to_t_coordinates(eta_t, t, step)
}

/// `η` in s-lengths `s = cosh(a/2)`, by the exact Jacobian `½ sinh(a/2)`.
pub fn to_s_coordinates(eta: &PoissonBivector, a: &[f64]) -> PoissonBivector {
    let jac = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        a.len(),
        a.iter().map(|&x| 0.5 * (0.5 * x).sinh()),
    ));
    eta.push_forward(&jac)
}

/// Inverse of [`to_s_coordinates`] given s-lengths.
pub fn from_s_coordinates(eta_s: &PoissonBivector, s: &[f64]) -> PoissonBivector {
    let jac = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        s.len(),
        s.iter().map(|&x| 2.0 / (0.5 * a_from_s(x)).sinh()),
    ));
    eta_s.push_forward(&jac)
}
