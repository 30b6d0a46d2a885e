//! Morse-potential fits of bond-stretch curves.

use super::lm::levenberg_marquardt;
use super::AnalysisError;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

pub const HARTREE_J: f64 = 4.359_744_722_207_1e-18;
pub const AMU_KG: f64 = 1.660_539_066_60e-27;
pub const C_CM_PER_S: f64 = 2.997_924_58e10;
pub const DEFAULT_WINDOW: usize = 7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorseFit {
    /// Well depth, Hartree.
    pub de: f64,
    /// Range parameter, 1/Angstrom.
    pub a: f64,
    /// Equilibrium distance, Angstrom.
    pub req: f64,
    /// Energy at the minimum, Hartree.
    pub e0: f64,
    /// 1-sigma uncertainties of `(de, a, req, e0)`.
    pub sigma: [f64; 4],
    pub covariance: [[f64; 4]; 4],
    /// Reduced mass, u.
    pub mu: f64,
    /// Harmonic wavenumber, 1/cm.
    pub omega: f64,
    pub sigma_omega: f64,
    pub n_points: usize,
    pub ssr: f64,
    pub converged: bool,
}

/// `D_e (1 - exp(-a (R - R_eq)))^2 + E_0`.
pub fn morse(r: f64, de: f64, a: f64, req: f64, e0: f64) -> f64 {
    let m = 1.0 - (-a * (r - req)).exp();
    de * m * m + e0
}

/// Harmonic wavenumber in 1/cm for `a` in 1/A, `de` in Hartree and `mu` in u.
pub fn harmonic_wavenumber(a: f64, de: f64, mu: f64) -> f64 {
    let omega = a * 1e10 * (2.0 * de * HARTREE_J / (mu * AMU_KG)).sqrt();
    omega / (2.0 * std::f64::consts::PI * C_CM_PER_S)
}

/// Indices of the `window` points nearest the discrete minimum.
pub fn fit_window(e: &[f64], window: usize) -> Result<std::ops::Range<usize>, AnalysisError> {
    let n = e.len();
    let imin = (0..n)
        .min_by(|&i, &j| e[i].total_cmp(&e[j]))
        .ok_or_else(|| AnalysisError::Input("empty curve".into()))?;
    if imin == 0 || imin + 1 == n {
        return Err(AnalysisError::NoMinimum);
    }
    let w = window.min(n);
    let start = imin.saturating_sub(w / 2).min(n - w);
    Ok(start..start + w)
}

/// Polynomial least squares `sum c_k x^k`.
fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Option<Vec<f64>> {
    let a = DMatrix::from_fn(x.len(), degree + 1, |i, k| x[i].powi(k as i32));
    let b = DVector::from_column_slice(y);
    let sol = (a.transpose() * &a).lu().solve(&(a.transpose() * b))?;
    Some(sol.iter().copied().collect())
}

/// Fits all given points (at least 5, minimum bracketed).
pub fn morse_fit(r: &[f64], e: &[f64], mu: f64) -> Result<MorseFit, AnalysisError> {
    if r.len() != e.len() {
        return Err(AnalysisError::Input("R and E lengths differ".into()));
    }
    if r.len() < 5 {
        return Err(AnalysisError::Input(format!("need at least 5 points, got {}", r.len())));
    }
    fit_window(e, r.len())?;
    // parabola then cubic prefit around the parabola vertex
    let c = polyfit(r, e, 2).ok_or(AnalysisError::Singular)?;
    if c[2] <= 0.0 {
        return Err(AnalysisError::NoMinimum);
    }
    let r0 = -c[1] / (2.0 * c[2]);
    let x: Vec<f64> = r.iter().map(|v| v - r0).collect();
    let q = polyfit(&x, e, 3).ok_or(AnalysisError::Singular)?;
    let a0 = if q[3] < 0.0 && -q[3] / q[2] < 10.0 {
        -q[3] / q[2]
    } else {
        2.0
    };
    let de0 = q[2] / (a0 * a0);
    let e00 = q[0];

    let model = |p: &[f64]| {
        let (de, a, req, e0) = (p[0], p[1], p[2], p[3]);
        let mut j = DMatrix::zeros(r.len(), 4);
        let res = r
            .iter()
            .zip(e)
            .enumerate()
            .map(|(i, (&ri, &ei))| {
                let u = (-a * (ri - req)).exp();
                let m = 1.0 - u;
                j[(i, 0)] = m * m;
                j[(i, 1)] = 2.0 * de * m * u * (ri - req);
                j[(i, 2)] = -2.0 * de * m * u * a;
                j[(i, 3)] = 1.0;
                de * m * m + e0 - ei
            })
            .collect();
        (res, j)
    };
    let fit = levenberg_marquardt(model, &[de0, a0, r0, e00], 500);
    let p = &fit.params;
    if !(p[0] > 0.0 && p[1] > 0.0) {
        return Err(AnalysisError::Numerical(format!(
            "Morse fit gave non-physical D_e = {:.3e}, a = {:.3e}",
            p[0], p[1]
        )));
    }
    let cov = fit.covariance().ok_or(AnalysisError::Singular)?;
    let mut covariance = [[0.0; 4]; 4];
    let mut sigma = [0.0; 4];
    for i in 0..4 {
        for k in 0..4 {
            covariance[i][k] = cov[(i, k)];
        }
        sigma[i] = cov[(i, i)].max(0.0).sqrt();
    }
    let omega = harmonic_wavenumber(p[1], p[0], mu);
    // d omega / d(de, a) = (omega / (2 de), omega / a)
    let g = [omega / (2.0 * p[0]), omega / p[1]];
    let var = g[0] * g[0] * cov[(0, 0)] + 2.0 * g[0] * g[1] * cov[(0, 1)] + g[1] * g[1] * cov[(1, 1)];
    Ok(MorseFit {
        de: p[0],
        a: p[1],
        req: p[2],
        e0: p[3],
        sigma,
        covariance,
        mu,
        omega,
        sigma_omega: var.max(0.0).sqrt(),
        n_points: r.len(),
        ssr: fit.ssr,
        converged: fit.converged,
    })
}

/// Fits the `window` points nearest the discrete minimum.
pub fn morse_fit_window(r: &[f64], e: &[f64], mu: f64, window: usize) -> Result<MorseFit, AnalysisError> {
    let w = fit_window(e, window)?;
    morse_fit(&r[w.clone()], &e[w], mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_recovery() {
        let r: Vec<f64> = (0..15).map(|i| 0.6 + 0.02 * i as f64).collect();
        let e: Vec<f64> = r.iter().map(|&x| morse(x, 0.17, 1.9, 0.745, -1.15)).collect();
        let f = morse_fit(&r, &e, 0.5039).unwrap();
        assert!((f.de - 0.17).abs() < 1e-8, "{}", f.de);
        assert!((f.a - 1.9).abs() < 1e-8);
        assert!((f.req - 0.745).abs() < 1e-8);
        assert!((f.e0 + 1.15).abs() < 1e-8);
        assert!(f.sigma.iter().all(|s| *s < 1e-6));
    }

    #[test]
    fn needs_bracketed_minimum() {
        let r: Vec<f64> = (0..6).map(|i| 0.8 + 0.1 * i as f64).collect();
        let e: Vec<f64> = r.iter().map(|&x| morse(x, 0.17, 1.9, 0.745, -1.15)).collect();
        assert!(matches!(morse_fit(&r, &e, 0.5), Err(AnalysisError::NoMinimum)));
    }

    #[test]
    fn wavenumber_scale() {
        // H2-like parameters land in the 4000-4500 1/cm range
        let w = harmonic_wavenumber(1.94, 0.17, 0.5039);
        assert!(w > 4000.0 && w < 4600.0, "{w}");
    }
}
