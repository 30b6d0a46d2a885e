//! Normal ordering with respect to a single-determinant reference and
//! truncation to 0-, 1- and 2-body parts.
//!
//! With reference occupations `n_k`, the only nonzero contraction inside a
//! canonical string (creators left of annihilators) is `c†_k c_k -> n_k`.
//! A bare string therefore equals the sum over contracted subsets `S` of
//! occupied modes common to both lists of `sign(S) {rest}`, and the inverse
//! map carries an extra `(-1)^|S|`.

use super::{FermionError, FermionOperator, Term};
use crate::bits::{above, below, count, iter_bits};
use crate::tensor::Tensor4;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Converts between bare and reference-normal-ordered readings of the strings.
///
/// `direction = 1.0` maps a bare operator to its normal-ordered coefficients;
/// `direction = -1.0` maps normal-ordered coefficients back to bare ones.
pub fn wick_contract(op: &FermionOperator, reference: u128, direction: f64) -> FermionOperator {
    let mut out = FermionOperator::zero(op.n_modes());
    for (t, c) in op.terms() {
        let shared = t.create & t.annihilate & reference;
        let mut s = shared;
        loop {
            let mut flips = 0usize;
            let (mut cr, mut an) = (t.create, t.annihilate);
            for k in iter_bits(s) {
                // c†_k to the right end of the creators, c_k to the left of the annihilators
                flips += count(cr & above(k)) + count(an & below(k));
                cr &= !(1 << k);
                an &= !(1 << k);
            }
            let mut sign = if flips.is_multiple_of(2) { 1.0 } else { -1.0 };
            if direction < 0.0 && count(s) % 2 == 1 {
                sign = -sign;
            }
            out.add_term(Term::new(cr, an), c * sign);
            if s == 0 {
                break;
            }
            s = (s - 1) & shared;
        }
    }
    out.compressed()
}

/// Retained 0-, 1- and 2-body parts of a normal-ordered operator.
///
/// `x ≈ scalar + sum one_body[p,q] {c†_p c_q}
///        + 1/4 sum two_body[p,q,r,s] {c†_p c†_q c_s c_r}`
/// with `two_body` antisymmetric in `(p,q)` and in `(r,s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyDecomposition {
    pub scalar: Complex64,
    pub one_body: DMatrix<Complex64>,
    pub two_body: Vec<Complex64>,
    pub n_modes: usize,
    pub reference: u128,
}

impl BodyDecomposition {
    fn idx(&self, [p, q, r, s]: [usize; 4]) -> usize {
        let n = self.n_modes;
        ((p * n + q) * n + r) * n + s
    }

    pub fn two(&self, idx: [usize; 4]) -> Complex64 {
        self.two_body[self.idx(idx)]
    }

    /// Normal-ordered operator `{...}` with the retained parts.
    pub fn to_normal_ordered(&self) -> FermionOperator {
        let n = self.n_modes;
        let mut op = FermionOperator::zero(n);
        op.add_term(Term::IDENTITY, self.scalar);
        for p in 0..n {
            for q in 0..n {
                op.add_product(&[p], &[q], self.one_body[(p, q)]);
            }
        }
        for p in 0..n {
            for q in p + 1..n {
                for r in 0..n {
                    for s in r + 1..n {
                        op.add_product(&[p, q], &[r, s], -self.two([p, q, r, s]));
                    }
                }
            }
        }
        op.compressed()
    }

    /// Same operator as bare strings.
    pub fn to_operator(&self) -> FermionOperator {
        wick_contract(&self.to_normal_ordered(), self.reference, -1.0)
    }

    /// Largest Hermiticity defect of the tensors.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.n_modes;
        let mut worst = (self.one_body.adjoint() - &self.one_body)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.norm()));
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let d = self.two([p, q, r, s]) - self.two([r, s, p, q]).conj();
                        worst = worst.max(d.norm());
                    }
                }
            }
        }
        worst.max(self.scalar.im.abs())
    }

    /// Real parts of the two-body tensor.
    pub fn two_body_real(&self) -> Tensor4 {
        let n = self.n_modes;
        let mut t = Tensor4::cube(n);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        t[[p, q, r, s]] = self.two([p, q, r, s]).re;
                    }
                }
            }
        }
        t
    }
}

/// Normal-orders `x` with respect to `reference` and keeps ranks up to two.
pub fn truncate_12(x: &FermionOperator, reference: u128) -> Result<BodyDecomposition, FermionError> {
    if !x.is_number_conserving() {
        return Err(FermionError::NotNumberConserving);
    }
    let n = x.n_modes();
    let normal = wick_contract(x, reference, 1.0);
    let mut out = BodyDecomposition {
        scalar: Complex64::default(),
        one_body: DMatrix::zeros(n, n),
        two_body: vec![Complex64::default(); n * n * n * n],
        n_modes: n,
        reference,
    };
    for (t, c) in normal.terms() {
        match t.rank() {
            (0, 0) => out.scalar += c,
            (1, 1) => {
                let p = t.create.trailing_zeros() as usize;
                let q = t.annihilate.trailing_zeros() as usize;
                out.one_body[(p, q)] += c;
            }
            (2, 2) => {
                let [p, q]: [usize; 2] = pair(t.create);
                let [r, s]: [usize; 2] = pair(t.annihilate);
                // {c†_p c†_q c_r c_s} = -{c†_p c†_q c_s c_r}
                let v = -c;
                for (a, b, sab) in [(p, q, 1.0), (q, p, -1.0)] {
                    for (d, e, sde) in [(r, s, 1.0), (s, r, -1.0)] {
                        let i = out.idx([a, b, d, e]);
                        out.two_body[i] += v * sab * sde;
                    }
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

/// `[x]_{1,2}` as a bare operator.
pub fn truncate_12_operator(x: &FermionOperator, reference: u128) -> Result<FermionOperator, FermionError> {
    if !x.is_number_conserving() {
        return Err(FermionError::NotNumberConserving);
    }
    let normal = wick_contract(x, reference, 1.0).filter(|t| t.rank().0 <= 2);
    Ok(wick_contract(&normal, reference, -1.0))
}

fn pair(mask: u128) -> [usize; 2] {
    let mut it = iter_bits(mask);
    [it.next().unwrap(), it.next().unwrap()]
}
