//! Molecular integral containers and their on-disk formats.
//!
//! Two-electron integrals are kept in chemists' notation: `g[[p, q, r, s]]`
//! is `(pq|rs)`, the coefficient of `1/2 sum_{st} c†_{p s} c†_{r t} c_{s t} c_{q s}`
//! in the spin-free Hamiltonian.

mod fcidump;
mod geminal;
mod reference;

pub use fcidump::{
    parse_dump, parse_extended, parse_fcidump, parse_tcdump, write_extended, write_fcidump, write_tcdump,
};
pub use geminal::{parse_geminal, write_geminal, GeminalTensor};
pub use reference::{ReferenceRow, ReferenceTable};

use crate::tensor::{Tensor2, Tensor4};
use thiserror::Error;

/// Tolerance for symmetry and Hermiticity checks of stored tensors.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Two entries of the same symmetry orbit may differ by at most this much.
pub const DUPLICATE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum IntegralError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: index {index} out of range 1..={max}")]
    Bounds { line: usize, index: usize, max: usize },
    #[error("line {line}: inconsistent duplicate entry: {msg}")]
    Consistency { line: usize, msg: String },
    #[error("invalid integral set: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Permutational symmetry of the two-electron tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// Real orbitals, ordinary Coulomb integrals: all eight permutations.
    EightFold,
    /// `(pq|rs) = (qp|sr) = (rs|pq)`; the transcorrelated two-body part.
    FourFold,
}

impl Symmetry {
    /// All index quadruples related to `[p, q, r, s]` (with repetition).
    pub fn orbit(self, [p, q, r, s]: [usize; 4]) -> Vec<[usize; 4]> {
        let mut out = vec![[p, q, r, s], [q, p, s, r], [r, s, p, q], [s, r, q, p]];
        if self == Symmetry::EightFold {
            out.extend([[q, p, r, s], [p, q, s, r], [s, r, p, q], [r, s, q, p]]);
        }
        out
    }

    /// Canonical representative of an orbit: its lexicographically largest member.
    pub fn canonical(self, idx: [usize; 4]) -> [usize; 4] {
        self.orbit(idx).into_iter().max().unwrap()
    }

    /// Number of distinct orbits over `n` orbitals.
    pub fn orbit_count(self, n: usize) -> usize {
        let pairs = n * (n + 1) / 2;
        match self {
            // n^2 (n+1)^2 / 8 for large n; exact count of pair-pair orbits
            Symmetry::EightFold => pairs * (pairs + 1) / 2,
            Symmetry::FourFold => {
                // orbits of (pq, rs) under transpose-both and pair exchange
                let mut count = 0;
                for p in 0..n {
                    for q in 0..n {
                        for r in 0..n {
                            for s in 0..n {
                                if self.canonical([p, q, r, s]) == [p, q, r, s] {
                                    count += 1;
                                }
                            }
                        }
                    }
                }
                count
            }
        }
    }
}

/// Scalar, one- and two-body coefficients of an electronic Hamiltonian over
/// spatial orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    pub n_orb: usize,
    pub n_elec: usize,
    pub ms2: i32,
    /// Constant energy offset (nuclear repulsion plus any folded core), Hartree.
    pub e_core: f64,
    /// `h[[p, q]] = <p|h|q>`.
    pub h: Tensor2,
    /// `g[[p, q, r, s]] = (pq|rs)`.
    pub g: Tensor4,
    pub symmetry: Symmetry,
    /// Doubly occupied orbitals already folded into `e_core` and `h`.
    pub frozen_core: usize,
}

impl IntegralSet {
    /// Zero Hamiltonian over `n_orb` orbitals.
    pub fn zeros(n_orb: usize, n_elec: usize, symmetry: Symmetry) -> Self {
        Self {
            n_orb,
            n_elec,
            ms2: 0,
            e_core: 0.0,
            h: Tensor2::square(n_orb),
            g: Tensor4::cube(n_orb),
            symmetry,
            frozen_core: 0,
        }
    }

    /// Checks Hermiticity of `h`, the declared symmetry of `g` and electron bookkeeping.
    pub fn validate(&self) -> Result<(), IntegralError> {
        let n = self.n_orb;
        if self.h.dims() != [n, n] || self.g.dims() != [n; 4] {
            return Err(IntegralError::Invariant(format!(
                "tensor shapes do not match n_orb = {n}"
            )));
        }
        let spin = self.ms2.unsigned_abs() as usize;
        if spin > self.n_elec || !(self.n_elec + spin).is_multiple_of(2) {
            return Err(IntegralError::Invariant(format!(
                "MS2 = {} incompatible with {} electrons",
                self.ms2, self.n_elec
            )));
        }
        if self.n_alpha() > n || self.n_beta() > n {
            return Err(IntegralError::Invariant(format!(
                "{} electrons do not fit in {n} orbitals",
                self.n_elec
            )));
        }
        let asym = self.h.asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(IntegralError::Invariant(format!(
                "one-body tensor not Hermitian (deviation {asym:e})"
            )));
        }
        let dev = self.symmetry_violation();
        if dev > SYMMETRY_TOL {
            return Err(IntegralError::Invariant(format!(
                "two-body tensor violates {:?} symmetry (deviation {dev:e})",
                self.symmetry
            )));
        }
        Ok(())
    }

    /// Largest deviation of `g` from its declared permutational symmetry.
    pub fn symmetry_violation(&self) -> f64 {
        symmetry_violation(&self.g, self.symmetry)
    }

    pub fn n_alpha(&self) -> usize {
        ((self.n_elec as i64 + self.ms2 as i64) / 2) as usize
    }

    pub fn n_beta(&self) -> usize {
        ((self.n_elec as i64 - self.ms2 as i64) / 2) as usize
    }

    /// Closed-shell determinant energy with the lowest `n_elec / 2` orbitals doubly occupied.
    pub fn reference_energy(&self) -> f64 {
        let (na, nb) = (self.n_alpha(), self.n_beta());
        let mut e = self.e_core;
        for i in 0..na {
            e += self.h[[i, i]];
        }
        for i in 0..nb {
            e += self.h[[i, i]];
        }
        // same-spin Coulomb minus exchange, opposite-spin Coulomb
        for (occ1, occ2, same) in [(na, na, true), (nb, nb, true), (na, nb, false)] {
            let factor = if same { 0.5 } else { 1.0 };
            for i in 0..occ1 {
                for j in 0..occ2 {
                    let mut v = self.g[[i, i, j, j]];
                    if same {
                        v -= self.g[[i, j, j, i]];
                    }
                    e += factor * v;
                }
            }
        }
        e
    }

    /// Folds the lowest `n_frozen` doubly occupied orbitals into `e_core` and `h`.
    pub fn freeze_core(&self, n_frozen: usize) -> Result<Self, IntegralError> {
        if n_frozen == 0 {
            return Ok(self.clone());
        }
        if 2 * n_frozen > self.n_elec || n_frozen > self.n_orb {
            return Err(IntegralError::Invariant(format!(
                "cannot freeze {n_frozen} orbitals with {} electrons in {} orbitals",
                self.n_elec, self.n_orb
            )));
        }
        let n_act = self.n_orb - n_frozen;
        let g = &self.g;
        let mut e_core = self.e_core;
        for c in 0..n_frozen {
            e_core += 2.0 * self.h[[c, c]];
            for d in 0..n_frozen {
                e_core += 2.0 * g[[c, c, d, d]] - g[[c, d, d, c]];
            }
        }
        let h = Tensor2::from_fn(n_act, n_act, |p, q| {
            let (p, q) = (p + n_frozen, q + n_frozen);
            let mut v = self.h[[p, q]];
            for c in 0..n_frozen {
                v += 2.0 * g[[p, q, c, c]] - g[[p, c, c, q]];
            }
            v
        });
        let mut g_act = Tensor4::cube(n_act);
        for p in 0..n_act {
            for q in 0..n_act {
                for r in 0..n_act {
                    for s in 0..n_act {
                        g_act[[p, q, r, s]] = g[[p + n_frozen, q + n_frozen, r + n_frozen, s + n_frozen]];
                    }
                }
            }
        }
        Ok(Self {
            n_orb: n_act,
            n_elec: self.n_elec - 2 * n_frozen,
            ms2: self.ms2,
            e_core,
            h,
            g: g_act,
            symmetry: self.symmetry,
            frozen_core: self.frozen_core + n_frozen,
        })
    }

    /// Averages `g` over its 8-fold orbits, returning an `EightFold` set.
    pub fn symmetrize_eightfold(&self) -> Self {
        let mut out = self.clone();
        out.g = symmetrize(&self.g, Symmetry::EightFold);
        out.symmetry = Symmetry::EightFold;
        out
    }

    /// Restriction to the leading `n` orbitals (no core folding).
    pub fn leading_block(&self, n: usize) -> Self {
        Self {
            n_orb: n,
            h: self.h.leading_block(n),
            g: self.g.leading_block(n),
            ..self.clone()
        }
    }
}

/// Extended orbital space: occupied, OBS-virtual and auxiliary blocks.
///
/// Indices `0..n_occ` are occupied, `n_occ..n_obs` are virtual orbitals of the
/// orbital basis, and `n_obs..base.n_orb` are auxiliary (complementary) orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedIntegralSet {
    pub base: IntegralSet,
    pub n_obs: usize,
    pub n_occ: usize,
    /// Fock matrix over the extended space; computed from `base` when absent.
    pub fock: Option<Tensor2>,
}

impl ExtendedIntegralSet {
    pub fn new(base: IntegralSet, n_obs: usize, n_occ: usize) -> Result<Self, IntegralError> {
        let ext = Self {
            base,
            n_obs,
            n_occ,
            fock: None,
        };
        ext.validate()?;
        Ok(ext)
    }

    pub fn validate(&self) -> Result<(), IntegralError> {
        self.base.validate()?;
        if !(self.n_occ <= self.n_obs && self.n_obs <= self.base.n_orb) {
            return Err(IntegralError::Invariant(format!(
                "need n_occ <= n_obs <= n_orb, got {} <= {} <= {}",
                self.n_occ, self.n_obs, self.base.n_orb
            )));
        }
        if 2 * self.n_occ != self.base.n_elec || self.base.ms2 != 0 {
            return Err(IntegralError::Invariant(format!(
                "closed-shell reference requires n_elec = 2 n_occ, got {} electrons and {} occupied",
                self.base.n_elec, self.n_occ
            )));
        }
        if let Some(f) = &self.fock {
            if f.dims() != [self.base.n_orb; 2] {
                return Err(IntegralError::Invariant("Fock matrix shape mismatch".into()));
            }
        }
        Ok(())
    }

    pub fn n_ext(&self) -> usize {
        self.base.n_orb
    }

    pub fn is_obs_virtual(&self, p: usize) -> bool {
        p >= self.n_occ && p < self.n_obs
    }
}

/// Largest deviation of `g` from symmetry `sym`.
pub fn symmetry_violation(g: &Tensor4, sym: Symmetry) -> f64 {
    let n = g.dims()[0];
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = g[[p, q, r, s]];
                    for o in sym.orbit([p, q, r, s]) {
                        worst = worst.max((g[o] - v).abs());
                    }
                }
            }
        }
    }
    worst
}

/// Orbit average of `g` under `sym`.
pub fn symmetrize(g: &Tensor4, sym: Symmetry) -> Tensor4 {
    let n = g.dims()[0];
    let mut out = Tensor4::cube(n);
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let orbit = sym.orbit([p, q, r, s]);
                    let mean = orbit.iter().map(|&o| g[o]).sum::<f64>() / orbit.len() as f64;
                    out[[p, q, r, s]] = mean;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_counts_follow_pair_formulas() {
        for n in 1..6 {
            let pairs = n * (n + 1) / 2;
            assert_eq!(Symmetry::EightFold.orbit_count(n), pairs * (pairs + 1) / 2);
        }
        // Burnside count for the order-4 group
        for n in 1..7 {
            assert_eq!(Symmetry::FourFold.orbit_count(n), (n.pow(4) + 3 * n * n) / 4);
        }
    }

    #[test]
    fn orbit_expansion_four_fold() {
        let orbit = Symmetry::FourFold.orbit([0, 1, 2, 3]);
        assert!(orbit.contains(&[1, 0, 3, 2]));
        assert!(orbit.contains(&[2, 3, 0, 1]));
        assert!(!orbit.contains(&[1, 0, 2, 3]));
    }

    #[test]
    fn freeze_core_rejects_too_many() {
        let set = IntegralSet::zeros(2, 2, Symmetry::EightFold);
        assert!(set.freeze_core(2).is_err());
        assert_eq!(set.freeze_core(1).unwrap().n_orb, 1);
    }

    #[test]
    fn reference_energy_one_orbital() {
        let mut set = IntegralSet::zeros(1, 2, Symmetry::EightFold);
        set.h[[0, 0]] = -1.0;
        set.g[[0, 0, 0, 0]] = 0.6;
        set.e_core = 0.2;
        assert!((set.reference_energy() - (0.2 - 2.0 + 0.6)).abs() < 1e-15);
    }
}
