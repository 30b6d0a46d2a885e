//! Second-quantized operators over spin orbitals.
//!
//! A term is a product `c†_{p1} c†_{p2} ... c_{q1} c_{q2} ...` with both index
//! lists ascending, stored as a pair of bitmasks. Whether a string is read as
//! a bare product or as a normal-ordered product `{...}` with respect to some
//! reference is up to the caller; [`wick`] converts between the two readings.
//!
//! Spin-orbital layout: spatial orbital `p` has spin-up mode `p` and
//! spin-down mode `p + M`.

pub mod fock;
pub mod slow;
pub mod wick;

pub use wick::{truncate_12, truncate_12_operator, wick_contract, BodyDecomposition};

use crate::bits::{above, below, count, iter_bits, merge_inversions};
use crate::integrals::IntegralSet;
use indexmap::IndexMap;
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Coefficients below this magnitude are removed.
pub const DROP_TOL: f64 = 1e-14;
/// Largest supported number of modes (bitmask width).
pub const MAX_MODES: usize = 128;

#[derive(Debug, Error, PartialEq)]
pub enum FermionError {
    #[error("operators act on different mode counts ({left} vs {right})")]
    ModeMismatch { left: usize, right: usize },
    #[error("operator does not conserve particle number")]
    NotNumberConserving,
    #[error("{what} too large: {size} exceeds limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}

/// Canonical ladder string: creators then annihilators, each ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub create: u128,
    pub annihilate: u128,
}

impl Term {
    pub const IDENTITY: Term = Term {
        create: 0,
        annihilate: 0,
    };

    pub fn new(create: u128, annihilate: u128) -> Self {
        Self { create, annihilate }
    }

    /// Rank as `(creators, annihilators)`.
    pub fn rank(&self) -> (usize, usize) {
        (count(self.create), count(self.annihilate))
    }

    pub fn is_number_conserving(&self) -> bool {
        count(self.create) == count(self.annihilate)
    }

    pub fn is_even(&self) -> bool {
        (count(self.create) + count(self.annihilate)).is_multiple_of(2)
    }

    /// Hermitian conjugate string and the sign from reversing both lists.
    pub fn adjoint(&self) -> (Term, f64) {
        let (k, l) = self.rank();
        let flips = k * k.saturating_sub(1) / 2 + l * l.saturating_sub(1) / 2;
        let sign = if flips % 2 == 0 { 1.0 } else { -1.0 };
        (Term::new(self.annihilate, self.create), sign)
    }

    /// Highest mode index referenced, if any.
    pub fn max_mode(&self) -> Option<usize> {
        let m = self.create | self.annihilate;
        (m != 0).then(|| 127 - m.leading_zeros() as usize)
    }
}

/// Builds a canonical term from explicit creator and annihilator lists, written
/// as `c†_{c0} c†_{c1} ... c_{a0} c_{a1} ...`. Returns `None` on repeated modes.
pub fn canonical_term(creators: &[usize], annihilators: &[usize]) -> Option<(Term, f64)> {
    let (create, s1) = sort_sign(creators)?;
    let (annihilate, s2) = sort_sign(annihilators)?;
    Some((Term::new(create, annihilate), s1 * s2))
}

fn sort_sign(list: &[usize]) -> Option<(u128, f64)> {
    let mut mask = 0u128;
    let mut inversions = 0;
    for &p in list {
        if mask & (1 << p) != 0 {
            return None;
        }
        inversions += count(mask & above(p));
        mask |= 1 << p;
    }
    Some((mask, if inversions % 2 == 0 { 1.0 } else { -1.0 }))
}

/// Linear combination of canonical ladder strings.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: IndexMap<Term, Complex64>,
}

impl FermionOperator {
    pub fn zero(n_modes: usize) -> Self {
        assert!(n_modes <= MAX_MODES, "at most {MAX_MODES} modes supported");
        Self {
            n_modes,
            terms: IndexMap::new(),
        }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self::scalar(n_modes, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(n_modes: usize, value: Complex64) -> Self {
        let mut op = Self::zero(n_modes);
        op.add_term(Term::IDENTITY, value);
        op
    }

    /// A single creation (`dagger`) or annihilation operator.
    pub fn ladder(n_modes: usize, mode: usize, dagger: bool) -> Self {
        assert!(mode < n_modes, "mode {mode} out of range");
        let bit = 1u128 << mode;
        let term = if dagger { Term::new(bit, 0) } else { Term::new(0, bit) };
        let mut op = Self::zero(n_modes);
        op.add_term(term, Complex64::new(1.0, 0.0));
        op
    }

    /// `c†_p c_q`.
    pub fn excitation(n_modes: usize, p: usize, q: usize) -> Self {
        let mut op = Self::zero(n_modes);
        op.add_product(&[p], &[q], Complex64::new(1.0, 0.0));
        op
    }

    pub fn number(n_modes: usize, p: usize) -> Self {
        Self::excitation(n_modes, p, p)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Complex64)> {
        self.terms.iter()
    }

    /// Terms sorted by rank, then by mode masks.
    pub fn sorted_terms(&self) -> Vec<(Term, Complex64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(t, c)| (*t, *c)).collect();
        v.sort_by_key(|(t, _)| (t.rank(), *t));
        v
    }

    pub fn coefficient(&self, term: &Term) -> Complex64 {
        self.terms.get(term).copied().unwrap_or_default()
    }

    /// Adds `value` to a canonical term without dropping small results.
    pub fn add_term(&mut self, term: Term, value: Complex64) {
        debug_assert!(term.max_mode().is_none_or(|m| m < self.n_modes));
        *self.terms.entry(term).or_default() += value;
    }

    /// Adds `value * c†_{creators...} c_{annihilators...}` in the written order.
    pub fn add_product(&mut self, creators: &[usize], annihilators: &[usize], value: Complex64) {
        if let Some((term, sign)) = canonical_term(creators, annihilators) {
            self.add_term(term, value * sign);
        }
    }

    /// Removes terms with `|c| < tol`.
    pub fn compress(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.norm() >= tol);
    }

    pub fn compressed(mut self) -> Self {
        self.compress(DROP_TOL);
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Largest coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.clone() - other.clone()).max_abs()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.n_modes);
        for (t, c) in &self.terms {
            out.terms.insert(*t, c * factor);
        }
        out.compressed()
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.n_modes);
        for (t, c) in &self.terms {
            let (ta, sign) = t.adjoint();
            out.add_term(ta, c.conj() * sign);
        }
        out
    }

    pub fn is_number_conserving(&self) -> bool {
        self.terms.keys().all(Term::is_number_conserving)
    }

    /// Whether `x† = x` coefficient-wise within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        (self.clone() + self.adjoint()).max_abs() <= tol
    }

    /// Number of creators/annihilators in the longest string.
    pub fn max_rank(&self) -> usize {
        self.terms.keys().map(|t| t.rank().0.max(t.rank().1)).max().unwrap_or(0)
    }

    /// Keeps only terms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&Term) -> bool) -> Self {
        let mut out = Self::zero(self.n_modes);
        for (t, c) in &self.terms {
            if keep(t) {
                out.terms.insert(*t, *c);
            }
        }
        out
    }

    /// Same operator embedded in a larger mode space.
    pub fn with_modes(&self, n_modes: usize) -> Self {
        assert!(
            self.terms.keys().all(|t| t.max_mode().is_none_or(|m| m < n_modes)),
            "operator does not fit in {n_modes} modes"
        );
        Self {
            n_modes,
            terms: self.terms.clone(),
        }
    }

    fn check_modes(&self, other: &Self) -> Result<(), FermionError> {
        if self.n_modes == other.n_modes {
            Ok(())
        } else {
            Err(FermionError::ModeMismatch {
                left: self.n_modes,
                right: other.n_modes,
            })
        }
    }

    /// Exact product, normal-ordered to canonical strings.
    pub fn multiply(&self, other: &Self) -> Result<Self, FermionError> {
        self.check_modes(other)?;
        let mut out = Self::zero(self.n_modes);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                multiply_terms(t1, t2, |t, s| out.add_term(t, c1 * c2 * s));
            }
        }
        Ok(out.compressed())
    }

    /// Exact commutator `xy - yx`.
    pub fn commutator(&self, other: &Self) -> Result<Self, FermionError> {
        self.check_modes(other)?;
        let mut out = Self::zero(self.n_modes);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                // even strings with no shared contractible modes commute
                if t1.is_even() && t2.is_even() && t1.annihilate & t2.create == 0 && t2.annihilate & t1.create == 0 {
                    continue;
                }
                let c = c1 * c2;
                multiply_terms(t1, t2, |t, s| out.add_term(t, c * s));
                multiply_terms(t2, t1, |t, s| out.add_term(t, -c * s));
            }
        }
        Ok(out.compressed())
    }

    /// Spin-orbital expansion of a spatial-orbital Hamiltonian.
    ///
    /// `e_core + sum h_pq E_pq + 1/2 sum (pq|rs) sum_{st} c†_{ps} c†_{rt} c_{st} c_{qs}`
    /// over `2 M` modes, spin-up block first.
    pub fn from_spatial(ints: &IntegralSet) -> Self {
        let m = ints.n_orb;
        let mut op = Self::zero(2 * m);
        let re = |v: f64| Complex64::new(v, 0.0);
        if ints.e_core != 0.0 {
            op.add_term(Term::IDENTITY, re(ints.e_core));
        }
        for p in 0..m {
            for q in 0..m {
                let v = ints.h[[p, q]];
                if v == 0.0 {
                    continue;
                }
                for s in [0, m] {
                    op.add_product(&[p + s], &[q + s], re(v));
                }
            }
        }
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    for s in 0..m {
                        let v = ints.g[[p, q, r, s]];
                        if v == 0.0 {
                            continue;
                        }
                        for sig in [0, m] {
                            for tau in [0, m] {
                                op.add_product(&[p + sig, r + tau], &[s + tau, q + sig], re(0.5 * v));
                            }
                        }
                    }
                }
            }
        }
        op.compressed()
    }
}

/// Product of two canonical strings, reported as `(term, sign)` pieces.
///
/// `c†C1 cA1 · c†C2 cA2`: every subset `S` of `A1 ∩ C2` is contracted (vacuum
/// contractions `c_k c†_k = 1`), the rest is reordered with anticommutation.
pub(crate) fn multiply_terms(t1: &Term, t2: &Term, mut emit: impl FnMut(Term, f64)) {
    let (c1, a1, c2, a2) = (t1.create, t1.annihilate, t2.create, t2.annihilate);
    let shared = a1 & c2;
    let mut s = shared;
    // enumerate submasks of `shared`, including the empty set
    loop {
        let a_left = a1 & !s;
        let c_left = c2 & !s;
        let create_ok = c1 & c_left == 0;
        let annihilate_ok = a_left & a2 == 0;
        if create_ok && annihilate_ok {
            let mut flips = 0usize;
            let (mut a_cur, mut c_cur) = (a1, c2);
            for k in iter_bits(s) {
                // a_k to the right end of the annihilators, c†_k to the left of the creators
                flips += count(a_cur & above(k)) + count(c_cur & below(k));
                a_cur &= !(1 << k);
                c_cur &= !(1 << k);
            }
            flips += count(a_left) * count(c_left);
            flips += merge_inversions(c1, c_left);
            flips += merge_inversions(a_left, a2);
            let sign = if flips.is_multiple_of(2) { 1.0 } else { -1.0 };
            emit(Term::new(c1 | c_left, a_left | a2), sign);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & shared;
    }
}

impl Add for FermionOperator {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.n_modes, rhs.n_modes, "mode count mismatch");
        for (t, c) in rhs.terms {
            self.add_term(t, c);
        }
        self.compressed()
    }
}

impl Sub for FermionOperator {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for FermionOperator {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul<f64> for FermionOperator {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale_real(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::fock::to_fock_matrix;
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn creator_times_annihilator_is_number() {
        let x = FermionOperator::ladder(2, 0, true)
            .multiply(&FermionOperator::ladder(2, 0, false))
            .unwrap();
        assert_eq!(x, FermionOperator::number(2, 0));
    }

    #[test]
    fn annihilator_times_creator() {
        let x = FermionOperator::ladder(2, 0, false)
            .multiply(&FermionOperator::ladder(2, 0, true))
            .unwrap();
        let want = FermionOperator::identity(2) - FermionOperator::number(2, 0);
        assert_eq!(x.max_abs_diff(&want), 0.0);
    }

    #[test]
    fn creators_anticommute() {
        let a = FermionOperator::ladder(3, 2, true);
        let b = FermionOperator::ladder(3, 0, true);
        let ab = a.multiply(&b).unwrap();
        assert_eq!(ab.coefficient(&Term::new(0b101, 0)), c(-1.0));
        assert!(a.multiply(&a).unwrap().is_empty());
    }

    #[test]
    fn self_commutator_vanishes() {
        let mut x = FermionOperator::zero(4);
        x.add_product(&[0, 3], &[1, 2], c(0.3));
        x.add_product(&[1], &[2], c(-0.7));
        assert!(x.commutator(&x).unwrap().is_empty());
    }

    #[test]
    fn number_ladder_relation() {
        let n0 = FermionOperator::number(2, 0);
        let cd = FermionOperator::ladder(2, 0, true);
        assert_eq!(n0.commutator(&cd).unwrap(), cd);
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let a = FermionOperator::number(2, 0);
        let b = FermionOperator::number(3, 0);
        assert!(matches!(a.multiply(&b), Err(FermionError::ModeMismatch { .. })));
    }

    #[test]
    fn adjoint_of_double_excitation() {
        let mut x = FermionOperator::zero(4);
        x.add_product(&[2, 3], &[0, 1], Complex64::new(0.5, 0.25));
        let xd = x.adjoint();
        let mx = to_fock_matrix(&x, None).unwrap();
        let mxd = to_fock_matrix(&xd, None).unwrap();
        assert!((mx.adjoint() - mxd).norm() < 1e-14);
    }

    #[test]
    fn one_orbital_diagonal() {
        let mut ints = IntegralSet::zeros(1, 2, crate::integrals::Symmetry::EightFold);
        ints.h[[0, 0]] = -0.5;
        let op = FermionOperator::from_spatial(&ints);
        let want = (FermionOperator::number(2, 0) + FermionOperator::number(2, 1)) * -0.5;
        assert_eq!(op.max_abs_diff(&want), 0.0);
    }
}
