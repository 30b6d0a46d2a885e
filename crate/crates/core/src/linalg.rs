//! Small linear-algebra kernels: a row-compressed complex sparse matrix and a
//! lowest-eigenpair solver (dense for small problems, Lanczos otherwise).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

/// Dense diagonalization is used up to this dimension.
pub const DENSE_EIGEN_DIM: usize = 400;
const KRYLOV_DIM: usize = 80;
const MAX_RESTARTS: usize = 200;

#[derive(Debug, Error, PartialEq)]
pub enum EigenError {
    #[error("empty matrix")]
    Empty,
    #[error("Lanczos did not converge (residual {residual:e})")]
    NotConverged { residual: f64 },
}

/// Row-compressed sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    /// Builds from per-column lists of `(row, value)`.
    pub fn from_columns(n: usize, columns: Vec<Vec<(usize, Complex64)>>) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col {
                rows[i].push((j, v));
            }
        }
        Self::from_rows(n, rows)
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        let mut row_start = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_start.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|(j, _)| *j);
            for (j, v) in row {
                cols.push(j);
                values.push(v);
            }
            row_start.push(cols.len());
        }
        Self {
            n,
            row_start,
            cols,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            for k in self.row_start[i]..self.row_start[i + 1] {
                acc += self.values[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::default(); self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.row_start[i]..self.row_start[i + 1] {
                m[(i, self.cols[k])] += self.values[k];
            }
        }
        m
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.to_dense_if_small();
        match d {
            Some(m) => (m.adjoint() - &m).iter().fold(0.0, |a, v| a.max(v.norm())),
            None => 0.0,
        }
    }

    fn to_dense_if_small(&self) -> Option<DMatrix<Complex64>> {
        (self.n <= 2048).then(|| self.to_dense())
    }

    /// `<x|A|x>` for a normalized `x`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        let y = self.apply(x);
        dot(x, &y)
    }
}

/// `sum conj(a_i) b_i`.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest eigenpair of a Hermitian dense matrix.
pub fn dense_ground(m: &DMatrix<Complex64>) -> Result<(f64, Vec<Complex64>), EigenError> {
    if m.nrows() == 0 {
        return Err(EigenError::Empty);
    }
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let (k, e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    Ok((*e, eig.eigenvectors.column(k).iter().copied().collect()))
}

/// Sorted eigenvalues of a Hermitian dense matrix.
pub fn dense_spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Lowest eigenpair of a Hermitian sparse matrix, residual below `tol`.
pub fn sparse_ground(m: &SparseMatrix, tol: f64) -> Result<(f64, Vec<Complex64>), EigenError> {
    let n = m.dim();
    if n == 0 {
        return Err(EigenError::Empty);
    }
    if n <= DENSE_EIGEN_DIM {
        return dense_ground(&m.to_dense());
    }
    // deterministic start with weight on every basis state
    let mut start: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.01 * ((i * 7919) % 101) as f64, 0.0))
        .collect();
    let s = norm(&start);
    start.iter_mut().for_each(|v| *v /= s);
    let mut best = (f64::INFINITY, start.clone(), f64::INFINITY);
    for _ in 0..MAX_RESTARTS {
        let (e, v, r) = lanczos_pass(m, &start);
        best = (e, v.clone(), r);
        if r <= tol {
            return Ok((e, v));
        }
        start = v;
    }
    Err(EigenError::NotConverged { residual: best.2 })
}

/// One thick-free Lanczos cycle with full reorthogonalization.
fn lanczos_pass(m: &SparseMatrix, start: &[Complex64]) -> (f64, Vec<Complex64>, f64) {
    let n = m.dim();
    let kmax = KRYLOV_DIM.min(n);
    let mut basis: Vec<Vec<Complex64>> = vec![start.to_vec()];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for k in 0..kmax {
        let mut w = m.apply(&basis[k]);
        let a = dot(&basis[k], &w).re;
        alpha.push(a);
        // two rounds of Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for v in &basis {
                let p = dot(v, &w);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= p * vi;
                }
            }
        }
        let b = norm(&w);
        if k + 1 == kmax || b < 1e-13 {
            break;
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w);
    }
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let y = eig.eigenvectors.column(idx);
    let mut v = vec![Complex64::default(); n];
    for (j, bj) in basis.iter().enumerate() {
        for (vi, bi) in v.iter_mut().zip(bj) {
            *vi += bi * y[j];
        }
    }
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let hv = m.apply(&v);
    let r: Vec<Complex64> = hv.iter().zip(&v).map(|(h, x)| h - x * *e).collect();
    (*e, v, norm(&r))
}

/// Dense vector helper for tests and callers mixing nalgebra types.
pub fn to_dvector(v: &[Complex64]) -> DVector<Complex64> {
    DVector::from_column_slice(v)
}
