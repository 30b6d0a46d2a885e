//! Dense row-major tensors used for integral storage.
//!
//! Rank-4 tensors are stored with the last index running fastest:
//! element `[p, q, r, s]` lives at `((p * d1 + q) * d2 + r) * d3 + s`.

use std::ops::{Index, IndexMut};

/// Dense rank-2 tensor (square or rectangular), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2 {
    dims: [usize; 2],
    data: Vec<f64>,
}

impl Tensor2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            dims: [rows, cols],
            data: vec![0.0; rows * cols],
        }
    }

    pub fn square(n: usize) -> Self {
        Self::zeros(n, n)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                t[[i, j]] = f(i, j);
            }
        }
        t
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Largest `|a_ij - a_ji|`; zero for symmetric matrices.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dims[0].min(self.dims[1]);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self[[i, j]] - self[[j, i]]).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dims, other.dims, "tensor shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Leading `n x n` block.
    pub fn leading_block(&self, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| self[[i, j]])
    }
}

impl Index<[usize; 2]> for Tensor2 {
    type Output = f64;
    #[inline]
    fn index(&self, [i, j]: [usize; 2]) -> &f64 {
        &self.data[i * self.dims[1] + j]
    }
}

impl IndexMut<[usize; 2]> for Tensor2 {
    #[inline]
    fn index_mut(&mut self, [i, j]: [usize; 2]) -> &mut f64 {
        &mut self.data[i * self.dims[1] + j]
    }
}

/// Dense rank-4 tensor, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    dims: [usize; 4],
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dims: [usize; 4]) -> Self {
        Self {
            dims,
            data: vec![0.0; dims.iter().product()],
        }
    }

    pub fn cube(n: usize) -> Self {
        Self::zeros([n; 4])
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    fn offset(&self, [p, q, r, s]: [usize; 4]) -> usize {
        ((p * self.dims[1] + q) * self.dims[2] + r) * self.dims[3] + s
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dims, other.dims, "tensor shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Leading `n^4` block of a cubic tensor.
    pub fn leading_block(&self, n: usize) -> Self {
        let mut out = Self::cube(n);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        out[[p, q, r, s]] = self[[p, q, r, s]];
                    }
                }
            }
        }
        out
    }

    pub fn map_inplace(&mut self, f: impl Fn(f64) -> f64) {
        for v in &mut self.data {
            *v = f(*v);
        }
    }
}

impl Index<[usize; 4]> for Tensor4 {
    type Output = f64;
    #[inline]
    fn index(&self, idx: [usize; 4]) -> &f64 {
        &self.data[self.offset(idx)]
    }
}

impl IndexMut<[usize; 4]> for Tensor4 {
    #[inline]
    fn index_mut(&mut self, idx: [usize; 4]) -> &mut f64 {
        let o = self.offset(idx);
        &mut self.data[o]
    }
}
