//! Pauli strings in symplectic form and sums of them.
//!
//! A [`PauliString`] with bit vectors `(x, z)` denotes `i^{|x & z|} X^x Z^z`,
//! so a set `x` and `z` bit on the same qubit is a `Y`. Qubit 0 is the least
//! significant bit everywhere, including basis-state indices.

pub mod encoding;
pub mod pipeline;
pub mod z2;

pub use encoding::{encode, Encoding, EncodingKind};
pub use pipeline::QubitMapping;
pub use z2::{find_z2_symmetries, taper, TaperingResult};

use crate::bits::{count, iter_bits};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Coefficients of a Hermitian sum may have imaginary parts up to this size.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Sums built by products drop terms below this magnitude.
pub const PAULI_DROP: f64 = 1e-14;

#[derive(Debug, Error, PartialEq)]
pub enum PauliError {
    #[error("qubit count mismatch ({0} vs {1})")]
    QubitMismatch(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    NonCommuting(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliString {
    pub x: u128,
    pub z: u128,
}

#[inline]
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn new(x: u128, z: u128) -> Self {
        Self { x, z }
    }

    pub fn single(qubit: usize, c: char) -> Self {
        let b = 1u128 << qubit;
        match c {
            'X' => Self::new(b, 0),
            'Y' => Self::new(b, b),
            'Z' => Self::new(0, b),
            _ => Self::IDENTITY,
        }
    }

    pub fn z_string(mask: u128) -> Self {
        Self::new(0, mask)
    }

    pub fn x_string(mask: u128) -> Self {
        Self::new(mask, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn support(&self) -> u128 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        count(self.support())
    }

    /// `'I' | 'X' | 'Y' | 'Z'` on one qubit.
    pub fn at(&self, qubit: usize) -> char {
        let xb = self.x >> qubit & 1 == 1;
        let zb = self.z >> qubit & 1 == 1;
        match (xb, zb) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn commutes(&self, other: &Self) -> bool {
        (count(self.x & other.z) + count(self.z & other.x)).is_multiple_of(2)
    }

    /// `self * other = phase * result`.
    pub fn mul(&self, other: &Self) -> (Complex64, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let k =
            count(self.x & self.z) + count(other.x & other.z) + 2 * count(self.z & other.x) + 4 * 128 - count(x & z);
        (i_pow(k as u32), PauliString { x, z })
    }

    /// `P|b> = phase |b'>`.
    #[inline]
    pub fn apply(&self, basis: u128) -> (Complex64, u128) {
        let k = count(self.x & self.z) + 2 * count(self.z & basis);
        (i_pow(k as u32), basis ^ self.x)
    }

    /// Text label over `n` qubits, qubit 0 rightmost.
    pub fn label(&self, n: usize) -> String {
        (0..n).rev().map(|q| self.at(q)).collect()
    }

    pub fn from_label(label: &str) -> Option<Self> {
        let n = label.len();
        let mut p = Self::IDENTITY;
        for (k, c) in label.chars().enumerate() {
            let q = n - 1 - k;
            let s = match c {
                'I' => Self::IDENTITY,
                'X' | 'Y' | 'Z' => Self::single(q, c),
                _ => return None,
            };
            p.x |= s.x;
            p.z |= s.z;
        }
        Some(p)
    }

    /// Removes one qubit, shifting higher qubits down.
    pub fn remove_qubit(&self, q: usize) -> Self {
        let squeeze = |m: u128| {
            let low = m & ((1u128 << q) - 1);
            let high = if q + 1 >= 128 { 0 } else { (m >> (q + 1)) << q };
            low | high
        };
        Self::new(squeeze(self.x), squeeze(self.z))
    }

    /// Dense `2^n x 2^n` matrix.
    pub fn matrix(&self, n: usize) -> DMatrix<Complex64> {
        let dim = 1usize << n;
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            let (ph, out) = self.apply(b as u128);
            m[(out as usize, b)] += ph;
        }
        m
    }
}

/// Sum of Pauli strings with complex coefficients, ordered by string.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    pub n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize, value: f64) -> Self {
        let mut s = Self::zero(n_qubits);
        s.add(PauliString::IDENTITY, Complex64::new(value, 0.0));
        s
    }

    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = (PauliString, Complex64)>) -> Self {
        let mut s = Self::zero(n_qubits);
        for (p, c) in terms {
            s.add(p, c);
        }
        s.simplified(PAULI_DROP)
    }

    pub fn add(&mut self, p: PauliString, c: Complex64) {
        debug_assert!(p.support() >> self.n_qubits == 0 || self.n_qubits >= 128);
        *self.terms.entry(p).or_default() += c;
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// Drops terms with `|c| < tol`.
    pub fn simplified(mut self, tol: f64) -> Self {
        self.terms.retain(|_, c| c.norm() >= tol);
        self
    }

    pub fn scale(&self, f: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= f;
        }
        out
    }

    pub fn add_sum(&mut self, other: &PauliSum) {
        for (p, c) in &other.terms {
            self.add(*p, *c);
        }
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut out = PauliSum::zero(self.n_qubits.max(other.n_qubits));
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                let (ph, r) = p.mul(q);
                out.add(r, c * d * ph);
            }
        }
        out.simplified(PAULI_DROP)
    }

    pub fn adjoint(&self) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    /// Largest imaginary part among coefficients.
    pub fn max_imag(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.im.abs()))
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_imag() <= HERMITIAN_TOL
    }

    pub fn max_abs_diff(&self, other: &PauliSum) -> f64 {
        let mut d = self.clone();
        d.add_sum(&other.scale(Complex64::new(-1.0, 0.0)));
        d.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Number of terms with `|c| > threshold`.
    pub fn count(&self, threshold: f64) -> usize {
        self.terms.values().filter(|c| c.norm() > threshold).count()
    }

    pub fn commutes_with(&self, p: &PauliString) -> bool {
        self.terms.keys().all(|t| t.commutes(p))
    }

    /// Dense matrix (small qubit counts only).
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let n = self.n_qubits;
        assert!(n <= 14, "dense Pauli matrix limited to 14 qubits");
        let dim = 1usize << n;
        let mut m = DMatrix::zeros(dim, dim);
        for (p, c) in &self.terms {
            for b in 0..dim {
                let (ph, out) = p.apply(b as u128);
                m[(out as usize, b)] += c * ph;
            }
        }
        m
    }

    /// Matrix restricted to a list of basis states; leakage is ignored.
    pub fn matrix_in_basis(&self, basis: &[u128]) -> DMatrix<Complex64> {
        let index: std::collections::HashMap<u128, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut m = DMatrix::zeros(basis.len(), basis.len());
        for (j, &b) in basis.iter().enumerate() {
            for (p, c) in &self.terms {
                let (ph, out) = p.apply(b);
                if let Some(&i) = index.get(&out) {
                    m[(i, j)] += c * ph;
                }
            }
        }
        m
    }

    /// Removes qubit `q` from every term; terms must act as `I` or `Z` there,
    /// and `Z` is replaced by `eigenvalue`.
    pub fn fix_z_qubit(&self, q: usize, eigenvalue: f64) -> Result<PauliSum, PauliError> {
        let mut out = PauliSum::zero(self.n_qubits - 1);
        for (p, c) in &self.terms {
            if p.x >> q & 1 == 1 {
                return Err(PauliError::Precondition(format!(
                    "term {} acts with X/Y on qubit {q}",
                    p.label(self.n_qubits)
                )));
            }
            let f = if p.z >> q & 1 == 1 { eigenvalue } else { 1.0 };
            out.add(p.remove_qubit(q), c * f);
        }
        Ok(out.simplified(PAULI_DROP))
    }

    /// Text form: a header comment, then `coefficient label` per line.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# pauli sum, {} qubits, little-endian: rightmost character is qubit 0\n",
            self.n_qubits
        );
        for (p, c) in &self.terms {
            if c.im == 0.0 {
                let _ = writeln!(out, "{:.17e} {}", c.re, p.label(self.n_qubits));
            } else {
                let _ = writeln!(out, "({:.17e},{:.17e}) {}", c.re, c.im, p.label(self.n_qubits));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<PauliSum, PauliError> {
        let mut n: Option<usize> = None;
        let mut terms = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let err = |msg: String| PauliError::Parse { line, msg };
            let (coef, label) = t
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| err("expected 'coefficient label'".into()))?;
            let coef = coef.trim();
            let value = if let Some(inner) = coef.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                let (re, im) = inner
                    .split_once(',')
                    .ok_or_else(|| err(format!("bad complex '{coef}'")))?;
                let re: f64 = re.trim().parse().map_err(|e| err(format!("{e}")))?;
                let im: f64 = im.trim().parse().map_err(|e| err(format!("{e}")))?;
                Complex64::new(re, im)
            } else {
                Complex64::new(
                    coef.parse()
                        .map_err(|e| err(format!("bad coefficient '{coef}': {e}")))?,
                    0.0,
                )
            };
            let p = PauliString::from_label(label).ok_or_else(|| err(format!("bad label '{label}'")))?;
            match n {
                None => n = Some(label.len()),
                Some(m) if m != label.len() => return Err(err(format!("label length {} != {m}", label.len()))),
                _ => {}
            }
            terms.push((p, value));
        }
        let mut s = PauliSum::zero(n.unwrap_or(0));
        for (p, c) in terms {
            s.add(p, c);
        }
        Ok(s)
    }

    /// Qubits touched by any term.
    pub fn support(&self) -> u128 {
        self.terms.keys().fold(0, |m, p| m | p.support())
    }

    pub fn strings(&self) -> impl Iterator<Item = &PauliString> {
        self.terms.keys()
    }
}

/// Renders a basis-state index as a bitstring, qubit 0 rightmost.
pub fn basis_label(b: u128, n: usize) -> String {
    (0..n).rev().map(|q| if b >> q & 1 == 1 { '1' } else { '0' }).collect()
}

/// Qubits set in `mask`, ascending.
pub fn qubits(mask: u128) -> Vec<usize> {
    iter_bits(mask).collect()
}
