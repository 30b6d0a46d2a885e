//! Dense Levenberg-Marquardt least squares with analytic Jacobians.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, PartialEq)]
pub struct LmResult {
    pub params: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    /// `J^T J` at the solution.
    pub normal: DMatrix<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl LmResult {
    /// `s^2 (J^T J)^-1` with `s^2 = ssr / (n - p)`; `None` if singular.
    pub fn covariance(&self) -> Option<DMatrix<f64>> {
        let n = self.residuals.len();
        let p = self.params.len();
        let dof = n.saturating_sub(p).max(1) as f64;
        let inv = self.normal.clone().try_inverse()?;
        Some(inv * (self.ssr / dof))
    }
}

/// Minimizes `sum r_i(p)^2`; `model` returns residuals and the Jacobian (`n x p`).
pub fn levenberg_marquardt(
    model: impl Fn(&[f64]) -> (Vec<f64>, DMatrix<f64>),
    p0: &[f64],
    max_iter: usize,
) -> LmResult {
    let mut p = p0.to_vec();
    let (mut r, mut j) = model(&p);
    let mut ssr: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    for it in 0..max_iter {
        iterations = it + 1;
        let jt = j.transpose();
        let a = &jt * &j;
        let g = &jt * DVector::from_column_slice(&r);
        if g.amax() <= 1e-15 * (1.0 + ssr) || ssr == 0.0 {
            converged = true;
            break;
        }
        let mut improved = false;
        for _ in 0..60 {
            let mut m = a.clone();
            for k in 0..m.nrows() {
                m[(k, k)] += lambda * a[(k, k)].max(1e-300);
            }
            let Some(step) = m.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let (rt, jt_) = model(&trial);
            let st: f64 = rt.iter().map(|v| v * v).sum();
            if st.is_finite() && st <= ssr {
                let small = step.iter().zip(&p).all(|(d, x)| d.abs() <= 1e-15 * (x.abs() + 1e-15));
                let flat = ssr - st <= 1e-15 * ssr;
                p = trial;
                r = rt;
                j = jt_;
                ssr = st;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                if small || (flat && ssr < 1e-28) {
                    converged = true;
                }
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            // no downhill step at any damping: a (numerical) minimum
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    let normal = j.transpose() * &j;
    LmResult {
        params: p,
        residuals: r,
        ssr,
        normal,
        iterations,
        converged,
    }
}
