//! Dense statevector simulation and exact ground-state oracles.
//!
//! Qubit `q` is bit `q` of the amplitude index (qubit 0 least significant).

use crate::ansatz::{AnsatzCircuit, Excitation, Gate, GateKind};
use crate::fermion::fock::{sparse_in_basis, spin_sector_basis};
use crate::fermion::FermionOperator;
use crate::linalg::{sparse_ground, EigenError, SparseMatrix};
use crate::pauli::{PauliError, PauliString, PauliSum, QubitMapping};
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

pub const MAX_QUBITS: usize = 20;
pub const TAYLOR_TOL: f64 = 1e-13;
/// Largest basis handed to the iterative eigensolver.
pub const MAX_SECTOR_DIM: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{0} qubits exceeds the statevector limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("basis state {state} out of range for {n} qubits")]
    BasisState { state: u128, n: usize },
    #[error("expected {expected} parameters, got {got}")]
    ParamLength { expected: usize, got: usize },
    #[error("qubit count mismatch ({0} vs {1})")]
    QubitMismatch(usize, usize),
    #[error("operator is not Hermitian (imaginary part {0:.3e})")]
    NonHermitian(f64),
    #[error("dimension {0} exceeds the exact-diagonalization limit")]
    Dimension(usize),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amps: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzPath {
    /// Gate by gate through the compiled circuit.
    Gates,
    /// `exp(theta G)` per block by a truncated Taylor series.
    Blocks,
    /// `cos + i sin P` per Pauli string of each block.
    Rotations,
}

impl StateVector {
    pub fn basis(n_qubits: usize, state: u128) -> Result<Self, SimError> {
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n_qubits));
        }
        if state >> n_qubits != 0 {
            return Err(SimError::BasisState { state, n: n_qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[state as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n_qubits));
        }
        assert_eq!(amps.len(), 1 << n_qubits);
        Ok(Self { n_qubits, amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        crate::linalg::norm(&self.amps)
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        crate::linalg::dot(&self.amps, &other.amps)
    }

    fn pairs(&mut self, q: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let bit = 1usize << q;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let (lo, hi) = self.amps.split_at_mut(b | bit);
                f(&mut lo[b], &mut hi[0]);
            }
        }
    }

    pub fn h(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        self.pairs(q, |a, b| {
            let (x, y) = (*a, *b);
            *a = (x + y) * s;
            *b = (x - y) * s;
        });
    }

    pub fn x(&mut self, q: usize) {
        self.pairs(q, std::mem::swap);
    }

    pub fn rx(&mut self, q: usize, angle: f64) {
        let c = Complex64::new((angle / 2.0).cos(), 0.0);
        let s = Complex64::new(0.0, -(angle / 2.0).sin());
        self.pairs(q, |a, b| {
            let (x, y) = (*a, *b);
            *a = c * x + s * y;
            *b = s * x + c * y;
        });
    }

    pub fn rz(&mut self, q: usize, angle: f64) {
        let lo = Complex64::from_polar(1.0, -angle / 2.0);
        let hi = Complex64::from_polar(1.0, angle / 2.0);
        self.pairs(q, |a, b| {
            *a *= lo;
            *b *= hi;
        });
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (1usize << control, 1usize << target);
        for b in 0..self.amps.len() {
            if b & c != 0 && b & t == 0 {
                self.amps.swap(b, b | t);
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate, theta: &[f64]) {
        let q = g.qubits[0];
        match g.kind {
            GateKind::H => self.h(q),
            GateKind::Rx90 => self.rx(q, std::f64::consts::FRAC_PI_2),
            GateKind::Rx90Dg => self.rx(q, -std::f64::consts::FRAC_PI_2),
            GateKind::Cnot => self.cnot(g.qubits[0], g.qubits[1]),
            GateKind::X => self.x(q),
            GateKind::Rz => {
                let angle = g.param.map_or(0.0, |p| g.scale * theta[p]);
                self.rz(q, angle)
            }
        }
    }

    /// `P |psi>` as a new amplitude vector.
    pub fn pauli_action(&self, p: &PauliString) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let (ph, t) = p.apply(b as u128);
            out[t as usize] = ph * a;
        }
        out
    }

    /// `<psi| P |psi>`.
    pub fn pauli_expectation(&self, p: &PauliString) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let (ph, t) = p.apply(b as u128);
            acc += self.amps[t as usize].conj() * ph * a;
        }
        acc
    }

    /// `exp(i phi P)` applied in place.
    pub fn pauli_rotation(&mut self, p: &PauliString, phi: f64) {
        let (c, s) = (phi.cos(), phi.sin());
        let pa = self.pauli_action(p);
        let is = Complex64::new(0.0, s);
        for (a, x) in self.amps.iter_mut().zip(pa) {
            *a = *a * c + is * x;
        }
    }

    /// `G |psi>` for a Pauli sum.
    pub fn sum_action(&self, ps: &PauliSum) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (p, c) in ps.terms() {
            for (b, a) in self.amps.iter().enumerate() {
                let (ph, t) = p.apply(b as u128);
                out[t as usize] += c * ph * a;
            }
        }
        out
    }

    /// `exp(t G)` applied in place by a scaled Taylor series.
    pub fn exp_action(&mut self, g: &PauliSum, t: f64) {
        let one_norm: f64 = g.terms().map(|(_, c)| c.norm()).sum::<f64>() * t.abs();
        let steps = one_norm.ceil().max(1.0) as usize;
        let h = t / steps as f64;
        for _ in 0..steps {
            let mut term = self.clone();
            let mut sum = self.amps.clone();
            for k in 1..200 {
                let next = term.sum_action(g);
                let f = h / k as f64;
                term.amps = next.into_iter().map(|x| x * f).collect();
                for (s, x) in sum.iter_mut().zip(&term.amps) {
                    *s += x;
                }
                if term.norm() < TAYLOR_TOL {
                    break;
                }
            }
            self.amps = sum;
        }
    }

    /// Real expectation of a Hermitian sum.
    pub fn expectation(&self, ps: &PauliSum) -> Result<f64, SimError> {
        if ps.n_qubits != self.n_qubits {
            return Err(SimError::QubitMismatch(ps.n_qubits, self.n_qubits));
        }
        if !ps.is_hermitian() {
            return Err(SimError::NonHermitian(ps.max_imag()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, c) in ps.terms() {
            acc += c * self.pauli_expectation(p);
        }
        if acc.im.abs() > 1e-10 {
            return Err(SimError::NonHermitian(acc.im));
        }
        Ok(acc.re)
    }
}

/// Computational-basis state of the encoded reference determinant.
pub fn prepare_reference(mapping: &QubitMapping) -> Result<StateVector, SimError> {
    let q = mapping.map_basis_state(mapping.reference_occupation())?;
    StateVector::basis(mapping.n_qubits(), q)
}

/// `U(theta) |psi>`.
pub fn apply_ansatz(
    circ: &AnsatzCircuit,
    theta: &[f64],
    psi: &StateVector,
    path: AnsatzPath,
) -> Result<StateVector, SimError> {
    if theta.len() != circ.n_params {
        return Err(SimError::ParamLength {
            expected: circ.n_params,
            got: theta.len(),
        });
    }
    if psi.n_qubits != circ.n_qubits {
        return Err(SimError::QubitMismatch(psi.n_qubits, circ.n_qubits));
    }
    let mut out = psi.clone();
    let ns = circ.n_slices as f64;
    match path {
        AnsatzPath::Gates => {
            for g in &circ.gates {
                out.apply_gate(g, theta);
            }
        }
        AnsatzPath::Blocks => {
            for _ in 0..circ.n_slices {
                for b in &circ.blocks {
                    if theta[b.param] != 0.0 {
                        out.exp_action(&b.generator(circ.n_qubits), theta[b.param] / ns);
                    }
                }
            }
        }
        AnsatzPath::Rotations => {
            for _ in 0..circ.n_slices {
                for b in &circ.blocks {
                    let t = theta[b.param] / ns;
                    if t != 0.0 {
                        for (p, c) in &b.terms {
                            out.pauli_rotation(p, c * t);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Sparse matrix of a Pauli sum over a list of basis states (all states if `None`).
pub fn pauli_sparse(ps: &PauliSum, basis: Option<&[u128]>) -> Result<SparseMatrix, SimError> {
    let full: Vec<u128>;
    let basis = match basis {
        Some(b) => b,
        None => {
            if ps.n_qubits > MAX_QUBITS {
                return Err(SimError::TooManyQubits(ps.n_qubits));
            }
            full = (0..1u128 << ps.n_qubits).collect();
            &full
        }
    };
    if basis.len() > MAX_SECTOR_DIM {
        return Err(SimError::Dimension(basis.len()));
    }
    let index: HashMap<u128, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let columns = basis
        .iter()
        .map(|&b| {
            let mut col: Vec<(usize, Complex64)> = Vec::new();
            for (p, c) in ps.terms() {
                let (ph, t) = p.apply(b);
                if let Some(&i) = index.get(&t) {
                    col.push((i, c * ph));
                }
            }
            col
        })
        .collect();
    Ok(SparseMatrix::from_columns(basis.len(), columns))
}

/// Lowest eigenpair of a Pauli sum, optionally restricted to basis states.
pub fn exact_ground_pauli(ps: &PauliSum, basis: Option<&[u128]>) -> Result<(f64, Vec<Complex64>), SimError> {
    Ok(sparse_ground(&pauli_sparse(ps, basis)?, 1e-10)?)
}

/// Lowest eigenpair of a fermion operator in the `(n_up, n_down)` sector.
pub fn exact_ground_fermion(
    op: &FermionOperator,
    n_orb: usize,
    n_up: usize,
    n_down: usize,
) -> Result<(f64, Vec<Complex64>), SimError> {
    let basis = spin_sector_basis(n_orb, n_up, n_down);
    if basis.len() > MAX_SECTOR_DIM {
        return Err(SimError::Dimension(basis.len()));
    }
    Ok(sparse_ground(
        &sparse_in_basis(&op.with_modes(2 * n_orb), &basis),
        1e-10,
    )?)
}

/// Statevector restricted to one `(n_up, n_down)` determinant sector.
///
/// Every UCCSD block and the Hamiltonian conserve both spin populations, so
/// the sector is invariant and amplitudes outside it stay zero.
#[derive(Debug, Clone)]
pub struct SectorEngine {
    pub basis: Vec<u128>,
    pub hamiltonian: SparseMatrix,
    pub generators: Vec<SparseMatrix>,
    pub n_slices: usize,
    pub reference: usize,
}

impl SectorEngine {
    pub fn new(
        op: &FermionOperator,
        n_orb: usize,
        n_up: usize,
        n_down: usize,
        excitations: &[Excitation],
        n_slices: usize,
    ) -> Result<Self, SimError> {
        let basis = spin_sector_basis(n_orb, n_up, n_down);
        if basis.len() > MAX_SECTOR_DIM {
            return Err(SimError::Dimension(basis.len()));
        }
        let hamiltonian = sparse_in_basis(&op.with_modes(2 * n_orb), &basis);
        let generators = excitations
            .iter()
            .map(|e| sparse_in_basis(&e.generator(2 * n_orb), &basis))
            .collect();
        let det = crate::fermion::fock::reference_determinant(n_orb, n_up, n_down);
        let reference = basis
            .iter()
            .position(|&b| b == det)
            .expect("reference lies in its own sector");
        Ok(Self {
            basis,
            hamiltonian,
            generators,
            n_slices: n_slices.max(1),
            reference,
        })
    }

    pub fn n_params(&self) -> usize {
        self.generators.len()
    }

    /// `exp(t K)` with `K^3 = -K` for a single or double excitation generator.
    fn rotate(k: &SparseMatrix, t: f64, psi: &mut [Complex64]) {
        let kp = k.apply(psi);
        let kkp = k.apply(&kp);
        let (s, c1) = (t.sin(), 1.0 - t.cos());
        for ((a, x), y) in psi.iter_mut().zip(&kp).zip(&kkp) {
            *a += x * s + y * c1;
        }
    }

    pub fn state(&self, theta: &[f64]) -> Result<Vec<Complex64>, SimError> {
        if theta.len() != self.n_params() {
            return Err(SimError::ParamLength {
                expected: self.n_params(),
                got: theta.len(),
            });
        }
        let mut psi = vec![Complex64::new(0.0, 0.0); self.basis.len()];
        psi[self.reference] = Complex64::new(1.0, 0.0);
        let ns = self.n_slices as f64;
        for _ in 0..self.n_slices {
            for (k, t) in self.generators.iter().zip(theta) {
                if *t != 0.0 {
                    Self::rotate(k, t / ns, &mut psi);
                }
            }
        }
        Ok(psi)
    }

    pub fn energy(&self, theta: &[f64]) -> Result<f64, SimError> {
        let psi = self.state(theta)?;
        Ok(self.hamiltonian.quadratic_form(&psi).re)
    }

    pub fn exact_ground(&self) -> Result<f64, SimError> {
        Ok(sparse_ground(&self.hamiltonian, 1e-10)?.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_expectation() {
        let psi = StateVector::basis(3, 0).unwrap();
        let z0 = PauliSum::from_terms(3, [(PauliString::single(0, 'Z'), Complex64::new(1.0, 0.0))]);
        assert_eq!(psi.expectation(&z0).unwrap(), 1.0);
        let (e, _) = exact_ground_pauli(&z0, None).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
    }

    #[test]
    fn limits() {
        assert!(matches!(StateVector::basis(21, 0), Err(SimError::TooManyQubits(21))));
        assert!(StateVector::basis(2, 4).is_err());
    }

    #[test]
    fn rotation_matches_taylor() {
        let p = PauliString::from_label("XYZ").unwrap();
        let mut a = StateVector::basis(3, 0b101).unwrap();
        a.h(1);
        let mut b = a.clone();
        a.pauli_rotation(&p, 0.37);
        let g = PauliSum::from_terms(3, [(p, Complex64::new(0.0, 1.0))]);
        b.exp_action(&g, 0.37);
        let d: f64 = a
            .amps
            .iter()
            .zip(&b.amps)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(d < 1e-13);
        assert!((a.norm() - 1.0).abs() < 1e-14);
    }
}
