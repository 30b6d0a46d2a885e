//! Dense and sparse Fock-space matrices of fermion operators.
//!
//! Basis states are occupation bitmasks; mode `k` carries the Jordan–Wigner
//! sign `(-1)^(number of occupied modes below k)`.

use super::{FermionError, FermionOperator, Term};
use crate::bits::{below, combinations, count, iter_bits};
use crate::linalg::SparseMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;

/// Full Fock-space dense matrices are limited to this many modes.
pub const MAX_FULL_MODES: usize = 16;
/// Sector-restricted matrices are limited to this many modes.
pub const MAX_SECTOR_MODES: usize = 28;
/// Dense matrix dimension limit.
pub const MAX_DENSE_DIM: usize = 1 << 14;

/// Applies a canonical string to a determinant: `Some((sign, result))` or `None` if it vanishes.
#[inline]
pub fn apply_term(term: &Term, det: u128) -> Option<(f64, u128)> {
    if det & term.annihilate != term.annihilate {
        return None;
    }
    let mut d = det;
    let mut flips = 0usize;
    // rightmost annihilator acts first: descending order
    let mut a = term.annihilate;
    while a != 0 {
        let k = 127 - a.leading_zeros() as usize;
        a &= !(1 << k);
        d &= !(1 << k);
        flips += count(d & below(k));
    }
    if d & term.create != 0 {
        return None;
    }
    let mut c = term.create;
    while c != 0 {
        let k = 127 - c.leading_zeros() as usize;
        c &= !(1 << k);
        flips += count(d & below(k));
        d |= 1 << k;
    }
    Some((if flips.is_multiple_of(2) { 1.0 } else { -1.0 }, d))
}

/// All determinants with `n` particles over `n_modes` modes, ascending.
pub fn sector_basis(n_modes: usize, n: usize) -> Vec<u128> {
    combinations(n_modes, n)
}

/// Determinants with `n_up` particles in modes `0..m` and `n_down` in `m..2m`.
pub fn spin_sector_basis(m: usize, n_up: usize, n_down: usize) -> Vec<u128> {
    let ups = combinations(m, n_up);
    let downs = combinations(m, n_down);
    let mut out = Vec::with_capacity(ups.len() * downs.len());
    for d in &downs {
        for u in &ups {
            out.push(u | (d << m));
        }
    }
    out.sort_unstable();
    out
}

/// Closed-shell style reference: lowest `n_up` spin-up and `n_down` spin-down modes.
pub fn reference_determinant(m: usize, n_up: usize, n_down: usize) -> u128 {
    below(n_up) | (below(n_down) << m)
}

/// Matrix of `op` in an explicit determinant basis; components leaving the basis are dropped.
pub fn matrix_in_basis(op: &FermionOperator, basis: &[u128]) -> DMatrix<Complex64> {
    let index: HashMap<u128, usize> = basis.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let n = basis.len();
    let mut m = DMatrix::zeros(n, n);
    for (j, &det) in basis.iter().enumerate() {
        for (term, c) in op.terms() {
            if let Some((sign, out)) = apply_term(term, det) {
                if let Some(&i) = index.get(&out) {
                    m[(i, j)] += c * sign;
                }
            }
        }
    }
    m
}

/// Sparse matrix of `op` in a determinant basis.
///
/// Terms are grouped by annihilator mask so that each determinant only visits
/// the groups it can feed.
pub fn sparse_in_basis(op: &FermionOperator, basis: &[u128]) -> SparseMatrix {
    let index: HashMap<u128, usize> = basis.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut groups: HashMap<u128, Vec<(Term, Complex64)>> = HashMap::new();
    for (t, c) in op.terms() {
        groups.entry(t.annihilate).or_default().push((*t, *c));
    }
    let groups: Vec<(u128, Vec<(Term, Complex64)>)> = groups.into_iter().collect();
    let mut columns: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); basis.len()];
    for (j, &det) in basis.iter().enumerate() {
        let mut acc: HashMap<usize, Complex64> = HashMap::new();
        for (ann, terms) in &groups {
            if det & ann != *ann {
                continue;
            }
            for (t, c) in terms {
                if let Some((sign, out)) = apply_term(t, det) {
                    if let Some(&i) = index.get(&out) {
                        *acc.entry(i).or_default() += c * sign;
                    }
                }
            }
        }
        let mut col: Vec<_> = acc.into_iter().filter(|(_, v)| v.norm() > 0.0).collect();
        col.sort_unstable_by_key(|(i, _)| *i);
        columns[j] = col;
    }
    SparseMatrix::from_columns(basis.len(), columns)
}

/// Dense Fock-space matrix, optionally restricted to a particle-number sector.
pub fn to_fock_matrix(op: &FermionOperator, sector: Option<usize>) -> Result<DMatrix<Complex64>, FermionError> {
    let n = op.n_modes();
    let basis: Vec<u128> = match sector {
        None => {
            if n > MAX_FULL_MODES {
                return Err(FermionError::SizeLimit {
                    what: "full Fock space mode count",
                    size: n,
                    limit: MAX_FULL_MODES,
                });
            }
            (0..1u128 << n).collect()
        }
        Some(k) => {
            if n > MAX_SECTOR_MODES {
                return Err(FermionError::SizeLimit {
                    what: "sector mode count",
                    size: n,
                    limit: MAX_SECTOR_MODES,
                });
            }
            let dim = binomial(n, k);
            if dim > MAX_DENSE_DIM {
                return Err(FermionError::SizeLimit {
                    what: "sector dimension",
                    size: dim,
                    limit: MAX_DENSE_DIM,
                });
            }
            sector_basis(n, k)
        }
    };
    Ok(matrix_in_basis(op, &basis))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `<bra| op |ket>` for two determinants.
pub fn matrix_element(op: &FermionOperator, bra: u128, ket: u128) -> Complex64 {
    let mut v = Complex64::default();
    for (t, c) in op.terms() {
        if let Some((sign, out)) = apply_term(t, ket) {
            if out == bra {
                v += c * sign;
            }
        }
    }
    v
}

/// Determinants obtained from `reference` by moving one or two particles,
/// excluding the reference itself. Singles come first.
pub fn singles_and_doubles(reference: u128, n_modes: usize) -> (Vec<u128>, Vec<u128>) {
    let occ: Vec<usize> = iter_bits(reference).collect();
    let virt: Vec<usize> = (0..n_modes).filter(|&k| reference & (1 << k) == 0).collect();
    let mut singles = Vec::new();
    for &i in &occ {
        for &a in &virt {
            singles.push(reference & !(1 << i) | (1 << a));
        }
    }
    let mut doubles = Vec::new();
    for (x, &i) in occ.iter().enumerate() {
        for &j in &occ[x + 1..] {
            for (y, &a) in virt.iter().enumerate() {
                for &b in &virt[y + 1..] {
                    doubles.push(reference & !(1 << i) & !(1 << j) | (1 << a) | (1 << b));
                }
            }
        }
    }
    (singles, doubles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_matrix() {
        let m = to_fock_matrix(&FermionOperator::identity(3), None).unwrap();
        assert_eq!(m, DMatrix::identity(8, 8));
    }

    #[test]
    fn number_operator_one_mode() {
        let m = to_fock_matrix(&FermionOperator::number(1, 0), None).unwrap();
        assert_eq!(m[(0, 0)], Complex64::default());
        assert_eq!(m[(1, 1)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn size_limits() {
        let op = FermionOperator::identity(17);
        assert!(to_fock_matrix(&op, None).is_err());
        assert!(to_fock_matrix(&op, Some(2)).is_ok());
        assert!(to_fock_matrix(&FermionOperator::identity(30), Some(1)).is_err());
    }

    #[test]
    fn jordan_wigner_sign() {
        // c†_1 on |1> (mode 0 occupied) picks up one sign
        let t = Term::new(0b10, 0);
        assert_eq!(apply_term(&t, 0b01), Some((-1.0, 0b11)));
        assert_eq!(apply_term(&t, 0b00), Some((1.0, 0b10)));
        assert_eq!(apply_term(&t, 0b10), None);
    }

    #[test]
    fn spin_sector_dimension() {
        assert_eq!(spin_sector_basis(4, 1, 1).len(), 16);
        assert_eq!(reference_determinant(4, 1, 1), 0b0001_0001);
        let (s, d) = singles_and_doubles(0b0011, 4);
        assert_eq!((s.len(), d.len()), (4, 1));
    }
}
