//! Linear binary encodings `|x> -> |A x>` of fermionic occupation vectors.

use super::{PauliError, PauliString, PauliSum, PAULI_DROP};
use crate::bits::{iter_bits, parity};
use crate::fermion::FermionOperator;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EncodingKind {
    JordanWigner,
    Parity,
}

impl std::str::FromStr for EncodingKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "jw" | "jordanwigner" => Ok(Self::JordanWigner),
            "parity" => Ok(Self::Parity),
            other => Err(format!("unknown encoding '{other}' (jw | parity)")),
        }
    }
}

impl std::fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::JordanWigner => "jw",
            Self::Parity => "parity",
        })
    }
}

/// Binary matrix `A` stored by rows, plus derived masks for the ladder images.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    pub kind: EncodingKind,
    pub n_modes: usize,
    /// `rows[i]` has bit `j` set iff `A_ij = 1`.
    pub rows: Vec<u128>,
    inverse: Vec<u128>,
}

/// Inverse of a square GF(2) matrix given by rows.
pub fn gf2_inverse(rows: &[u128]) -> Option<Vec<u128>> {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut inv: Vec<u128> = (0..n).map(|i| 1u128 << i).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..n {
            if r != col && a[r] >> col & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Some(inv)
}

impl Encoding {
    pub fn new(kind: EncodingKind, n_modes: usize) -> Self {
        assert!(n_modes <= 128, "at most 128 modes");
        let rows: Vec<u128> = match kind {
            EncodingKind::JordanWigner => (0..n_modes).map(|i| 1u128 << i).collect(),
            EncodingKind::Parity => (0..n_modes)
                .map(|i| if i == 127 { u128::MAX } else { (1u128 << (i + 1)) - 1 })
                .collect(),
        };
        let inverse = gf2_inverse(&rows).expect("built-in encodings are invertible");
        Self {
            kind,
            n_modes,
            rows,
            inverse,
        }
    }

    pub fn jordan_wigner(n_modes: usize) -> Self {
        Self::new(EncodingKind::JordanWigner, n_modes)
    }

    pub fn parity(n_modes: usize) -> Self {
        Self::new(EncodingKind::Parity, n_modes)
    }

    pub fn inverse_rows(&self) -> &[u128] {
        &self.inverse
    }

    /// Qubit basis state `A x` for occupation bitmask `x`.
    pub fn encode_state(&self, occupation: u128) -> u128 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |q, (i, r)| if parity(r & occupation) { q | 1 << i } else { q })
    }

    pub fn decode_state(&self, qubits: u128) -> u128 {
        self.inverse
            .iter()
            .enumerate()
            .fold(0, |x, (i, r)| if parity(r & qubits) { x | 1 << i } else { x })
    }

    /// Column `j` of `A`: qubits flipped when mode `j` changes occupation.
    fn update_set(&self, j: usize) -> u128 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |m, (i, r)| if r >> j & 1 == 1 { m | 1 << i } else { m })
    }

    /// Qubits whose parity gives the occupation of mode `j`.
    fn occupation_set(&self, j: usize) -> u128 {
        self.inverse[j]
    }

    /// Qubits whose parity gives the occupation of modes `< j`.
    fn sign_set(&self, j: usize) -> u128 {
        self.inverse[..j].iter().fold(0, |m, r| m ^ r)
    }

    /// Image of `c†_j` (`dagger`) or `c_j`.
    pub fn ladder(&self, j: usize, dagger: bool) -> PauliSum {
        // X^U Z^P (1 +- Z^R) / 2
        let u = PauliString::x_string(self.update_set(j));
        let p = PauliString::z_string(self.sign_set(j));
        let r = PauliString::z_string(self.occupation_set(j));
        let (ph1, up) = u.mul(&p);
        let (ph2, upr) = up.mul(&r);
        let s = if dagger { 0.5 } else { -0.5 };
        PauliSum::from_terms(self.n_modes, [(up, ph1 * 0.5), (upr, ph1 * ph2 * s)])
    }
}

/// Pauli image of a fermion operator. The identity term carries the scalar part.
pub fn encode(op: &FermionOperator, enc: &Encoding) -> Result<PauliSum, PauliError> {
    if op.n_modes() > enc.n_modes {
        return Err(PauliError::QubitMismatch(op.n_modes(), enc.n_modes));
    }
    let mut cache: HashMap<(usize, bool), PauliSum> = HashMap::new();
    let mut ladder = |j: usize, dagger: bool| -> PauliSum {
        cache
            .entry((j, dagger))
            .or_insert_with(|| enc.ladder(j, dagger))
            .clone()
    };
    let mut out = PauliSum::zero(enc.n_modes);
    for (t, c) in op.sorted_terms() {
        if !t.is_even() {
            return Err(PauliError::Precondition(
                "operator does not conserve number parity".into(),
            ));
        }
        let mut acc = PauliSum::identity(enc.n_modes, 1.0);
        for j in iter_bits(t.create) {
            acc = acc.mul(&ladder(j, true));
        }
        for j in iter_bits(t.annihilate) {
            acc = acc.mul(&ladder(j, false));
        }
        out.add_sum(&acc.scale(c));
    }
    Ok(out.simplified(PAULI_DROP))
}

/// Real-coefficient copy of a Hermitian sum; fails if any imaginary part exceeds `tol`.
pub fn hermitian_real(ps: &PauliSum, tol: f64) -> Result<PauliSum, PauliError> {
    if ps.max_imag() > tol {
        return Err(PauliError::Precondition(format!(
            "imaginary coefficient {:.3e} in a Hermitian operator",
            ps.max_imag()
        )));
    }
    Ok(PauliSum::from_terms(
        ps.n_qubits,
        ps.terms().map(|(p, c)| (*p, Complex64::new(c.re, 0.0))),
    ))
}
