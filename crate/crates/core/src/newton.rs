//! Damped Newton iteration with a central finite-difference Jacobian.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    /// Stop when `‖F‖_∞ ≤ tol`.
    pub tol: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    /// Relative finite-difference step: `h_i = fd_step · max(|x_i|, fd_floor)`.
    pub fd_step: f64,
    pub fd_floor: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iterations: 100,
            max_halvings: 30,
            fd_step: 1e-6,
            fd_floor: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOutcome {
    /// Best iterate found (smallest residual).
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| if x.abs() > m || x.is_nan() { x.abs() } else { m })
}

/// Central-difference Jacobian, `J[(i, j)] = ∂F_i/∂x_j`.
pub fn fd_jacobian(
    f: &mut impl FnMut(&[f64]) -> Vec<f64>,
    x: &[f64],
    rel_step: f64,
    floor: f64,
) -> DMatrix<f64> {
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    let mut m = 0;
    let mut probe = x.to_vec();
    for j in 0..n {
        let h = rel_step * x[j].abs().max(floor);
        let h = if h > 0.0 { h } else { rel_step };
        probe[j] = x[j] + h;
        let up = f(&probe);
        probe[j] = x[j] - h;
        let down = f(&probe);
        probe[j] = x[j];
        m = up.len();
        cols.push(up.iter().zip(&down).map(|(u, d)| (u - d) / (2.0 * h)).collect::<Vec<_>>());
    }
    DMatrix::from_fn(m, n, |i, j| cols[j][i])
}

/// Solves `F(x) = 0` from `x0`. Each Newton step is halved until the
/// residual decreases and `admissible` holds, up to `max_halvings` times.
pub fn damped_newton(
    mut f: impl FnMut(&[f64]) -> Vec<f64>,
    x0: Vec<f64>,
    admissible: impl Fn(&[f64]) -> bool,
    opts: &NewtonOptions,
) -> NewtonOutcome {
    let mut x = x0;
    let mut r = f(&x);
    let mut norm = max_norm(&r);
    let mut iterations = 0;
    while !(norm <= opts.tol) && iterations < opts.max_iterations {
        iterations += 1;
        let jac = fd_jacobian(&mut f, &x, opts.fd_step, opts.fd_floor);
        let rhs = -DVector::from_column_slice(&r);
        let Some(step) = jac.lu().solve(&rhs) else {
            break;
        };
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, s)| xi + scale * s).collect();
            if admissible(&trial) {
                let rt = f(&trial);
                let nt = max_norm(&rt);
                if nt < norm {
                    accepted = Some((trial, rt, nt));
                    break;
                }
            }
            scale *= 0.5;
        }
        let Some((xn, rn, nn)) = accepted else {
            break;
        };
        log::trace!("newton iteration {iterations}: residual {nn:.3e}, damping {scale}");
        x = xn;
        r = rn;
        norm = nn;
    }
    NewtonOutcome {
        converged: norm <= opts.tol,
        x,
        residual: norm,
        iterations,
    }
}
