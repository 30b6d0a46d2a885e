//! Complete-basis-set extrapolation and composite energies.

use super::lm::levenberg_marquardt;
use super::AnalysisError;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtrapolationKind {
    /// `alpha + beta exp(gamma x)`.
    Rhf,
    /// `alpha' + beta' / x^3`.
    Correlation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtrapolationResult {
    pub kind: ExtrapolationKind,
    /// `(alpha, beta, gamma)` or `(alpha', beta')`.
    pub params: Vec<f64>,
    pub e_cbs: f64,
    pub residuals: Vec<f64>,
    pub converged: bool,
    /// Set when the fit is degenerate or did not converge.
    pub flag: Option<String>,
}

/// Cardinal number of a correlation-consistent basis name (`cc-pVTZ` -> 3).
pub fn cardinal(basis: &str) -> Option<u32> {
    let b = basis.to_ascii_lowercase();
    let tag = b.strip_prefix("cc-pv")?.strip_suffix('z')?;
    match tag {
        "d" => Some(2),
        "t" => Some(3),
        "q" => Some(4),
        t => t.parse().ok(),
    }
}

fn linear_fit(x: &[f64], e: &[f64], basis: impl Fn(f64) -> f64) -> Option<(f64, f64, f64)> {
    let a = DMatrix::from_fn(x.len(), 2, |i, k| if k == 0 { 1.0 } else { basis(x[i]) });
    let b = DVector::from_column_slice(e);
    let sol = (a.transpose() * &a).lu().solve(&(a.transpose() * &b))?;
    let res = &a * &sol - b;
    Some((sol[0], sol[1], res.norm_squared()))
}

/// RHF extrapolation; at least 3 points.
pub fn cbs_rhf(x: &[f64], e: &[f64]) -> Result<ExtrapolationResult, AnalysisError> {
    if x.len() != e.len() || x.len() < 3 {
        return Err(AnalysisError::Input(
            "RHF extrapolation needs at least 3 (x, E) points".into(),
        ));
    }
    let mean = e.iter().sum::<f64>() / e.len() as f64;
    let spread = e.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    if spread <= 1e-12 * mean.abs().max(1.0) {
        return Ok(ExtrapolationResult {
            kind: ExtrapolationKind::Rhf,
            params: vec![mean, 0.0, f64::NAN],
            e_cbs: mean,
            residuals: e.iter().map(|v| mean - v).collect(),
            converged: true,
            flag: Some("flat series: gamma indeterminate".into()),
        });
    }
    // variable projection over gamma, starting from -1.5
    let ssr = |g: f64| linear_fit(x, e, |t| (g * t).exp()).map_or(f64::INFINITY, |f| f.2);
    let mut best = (-1.5, ssr(-1.5));
    for k in 1..=400 {
        let g = -0.02 * k as f64;
        let s = ssr(g);
        if s < best.1 {
            best = (g, s);
        }
    }
    let (mut lo, mut hi) = (best.0 - 0.02, (best.0 + 0.02).min(-1e-6));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if ssr(m1) < ssr(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let g0 = 0.5 * (lo + hi);
    let (a0, b0, _) = linear_fit(x, e, |t| (g0 * t).exp()).ok_or(AnalysisError::Singular)?;
    let model = |p: &[f64]| {
        let mut j = DMatrix::zeros(x.len(), 3);
        let r = x
            .iter()
            .zip(e)
            .enumerate()
            .map(|(i, (&t, &v))| {
                let ex = (p[2] * t).exp();
                j[(i, 0)] = 1.0;
                j[(i, 1)] = ex;
                j[(i, 2)] = p[1] * t * ex;
                p[0] + p[1] * ex - v
            })
            .collect();
        (r, j)
    };
    let fit = levenberg_marquardt(model, &[a0, b0, g0], 200);
    let mut flag = None;
    if !fit.converged {
        flag = Some("extrapolation did not converge".into());
    } else if fit.params[2] >= 0.0 {
        flag = Some("non-decaying exponent".into());
    }
    Ok(ExtrapolationResult {
        kind: ExtrapolationKind::Rhf,
        e_cbs: fit.params[0],
        params: fit.params.clone(),
        residuals: fit.residuals.clone(),
        converged: fit.converged,
        flag,
    })
}

/// Correlation-energy extrapolation; at least 2 points.
pub fn cbs_corr(x: &[f64], c: &[f64]) -> Result<ExtrapolationResult, AnalysisError> {
    if x.len() != c.len() || x.len() < 2 {
        return Err(AnalysisError::Input(
            "correlation extrapolation needs at least 2 (x, C) points".into(),
        ));
    }
    let (a, b, _) = linear_fit(x, c, |t| t.powi(-3)).ok_or(AnalysisError::Singular)?;
    Ok(ExtrapolationResult {
        kind: ExtrapolationKind::Correlation,
        params: vec![a, b],
        e_cbs: a,
        residuals: x.iter().zip(c).map(|(t, v)| a + b / t.powi(3) - v).collect(),
        converged: true,
        flag: None,
    })
}

/// Large-basis RHF energy plus a correlation energy.
pub fn composite_energy(e_rhf_large: f64, e_corr: f64) -> f64 {
    e_rhf_large + e_corr
}
