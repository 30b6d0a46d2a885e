//! Encoding, two-qubit reduction and tapering chained into one mapping.

use super::encoding::{encode, hermitian_real, Encoding, EncodingKind};
use super::z2::{find_z2_symmetries, z_eigenvalue, Tapering};
use super::{PauliError, PauliString, PauliSum};
use crate::fermion::FermionOperator;

/// Removes parity qubits `M-1` (spin-up parity) and `2M-1` (total parity),
/// replacing their `Z` by the sector eigenvalues.
pub fn two_qubit_reduction(ps: &PauliSum, n_up: usize, n_down: usize) -> Result<PauliSum, PauliError> {
    if !ps.n_qubits.is_multiple_of(2) || ps.n_qubits < 2 {
        return Err(PauliError::Precondition(format!(
            "two-qubit reduction needs an even register, got {}",
            ps.n_qubits
        )));
    }
    let m = ps.n_qubits / 2;
    let up = if n_up.is_multiple_of(2) { 1.0 } else { -1.0 };
    let total = if (n_up + n_down).is_multiple_of(2) { 1.0 } else { -1.0 };
    ps.fix_z_qubit(2 * m - 1, total)?.fix_z_qubit(m - 1, up)
}

fn squeeze(b: u128, q: usize) -> u128 {
    let low = b & ((1u128 << q) - 1);
    low | (b >> (q + 1)) << q
}

/// Fermion-to-qubit map for a fixed `(n_up, n_down)` sector.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitMapping {
    pub encoding: Encoding,
    pub n_orb: usize,
    pub n_up: usize,
    pub n_down: usize,
    pub reduce: bool,
    pub tapering: Option<Tapering>,
}

impl QubitMapping {
    pub fn new(kind: EncodingKind, n_orb: usize, n_up: usize, n_down: usize, reduce: bool) -> Result<Self, PauliError> {
        if reduce && kind != EncodingKind::Parity {
            return Err(PauliError::Precondition(
                "two-qubit reduction requires the parity encoding".into(),
            ));
        }
        if n_up > n_orb || n_down > n_orb {
            return Err(PauliError::Precondition("more electrons than orbitals".into()));
        }
        Ok(Self {
            encoding: Encoding::new(kind, 2 * n_orb),
            n_orb,
            n_up,
            n_down,
            reduce,
            tapering: None,
        })
    }

    /// Qubits before tapering.
    pub fn untapered_qubits(&self) -> usize {
        2 * self.n_orb - if self.reduce { 2 } else { 0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.untapered_qubits() - self.tapering.as_ref().map_or(0, |t| t.generators.len())
    }

    /// Closed-shell style reference: lowest `n_up` up and `n_down` down orbitals.
    pub fn reference_occupation(&self) -> u128 {
        crate::fermion::fock::reference_determinant(self.n_orb, self.n_up, self.n_down)
    }

    fn encode_reduce(&self, op: &FermionOperator) -> Result<PauliSum, PauliError> {
        let ps = encode(&op.with_modes(2 * self.n_orb), &self.encoding)?;
        if self.reduce {
            two_qubit_reduction(&ps, self.n_up, self.n_down)
        } else {
            Ok(ps)
        }
    }

    fn reduce_state(&self, occupation: u128) -> u128 {
        let q = self.encoding.encode_state(occupation);
        if self.reduce {
            let m = self.n_orb;
            squeeze(squeeze(q, 2 * m - 1), m - 1)
        } else {
            q
        }
    }

    /// Finds diagonal Z2 symmetries of the mapped Hamiltonian and fixes their
    /// eigenvalues from the reference state. Returns the number of qubits removed.
    pub fn enable_tapering(&mut self, hamiltonian: &FermionOperator) -> Result<usize, PauliError> {
        self.tapering = None;
        let ps = self.encode_reduce(hamiltonian)?;
        let gens: Vec<PauliString> = find_z2_symmetries(&ps).into_iter().filter(|g| g.x == 0).collect();
        let reference = self.reduce_state(self.reference_occupation());
        let sector = gens
            .iter()
            .map(|g| z_eigenvalue(g, reference))
            .collect::<Result<Vec<_>, _>>()?;
        let plan = Tapering::new(ps.n_qubits, &gens, &sector)?;
        let k = plan.generators.len();
        self.tapering = Some(plan);
        Ok(k)
    }

    /// Generators and sector in use, empty without tapering.
    pub fn generators(&self) -> (Vec<PauliString>, Vec<i8>) {
        match &self.tapering {
            Some(t) => (t.generators.clone(), t.sector.clone()),
            None => (Vec::new(), Vec::new()),
        }
    }

    /// Whether the operator survives tapering (commutes with every generator).
    pub fn preserves_symmetry(&self, op: &FermionOperator) -> Result<bool, PauliError> {
        let Some(t) = &self.tapering else {
            return Ok(true);
        };
        let ps = self.encode_reduce(op)?;
        Ok(t.generators.iter().all(|g| ps.commutes_with(g)))
    }

    pub fn map_operator(&self, op: &FermionOperator) -> Result<PauliSum, PauliError> {
        let ps = self.encode_reduce(op)?;
        match &self.tapering {
            Some(t) => {
                if let Some(g) = t.generators.iter().find(|g| !ps.commutes_with(g)) {
                    return Err(PauliError::NonCommuting(format!(
                        "operator breaks symmetry {}",
                        g.label(ps.n_qubits)
                    )));
                }
                t.apply(&ps)
            }
            None => Ok(ps),
        }
    }

    /// Mapped Hermitian operator with real coefficients.
    pub fn map_hamiltonian(&self, op: &FermionOperator) -> Result<PauliSum, PauliError> {
        hermitian_real(&self.map_operator(op)?, 1e-10)
    }

    /// Qubit basis index of an occupation-number determinant.
    pub fn map_basis_state(&self, occupation: u128) -> Result<u128, PauliError> {
        let q = self.reduce_state(occupation);
        match &self.tapering {
            Some(t) => t.taper_state(q),
            None => Ok(q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let m = QubitMapping::new(EncodingKind::Parity, 4, 1, 1, true).unwrap();
        assert_eq!(m.n_qubits(), 6);
        let m = QubitMapping::new(EncodingKind::JordanWigner, 15, 1, 1, false).unwrap();
        assert_eq!(m.n_qubits(), 30);
        assert!(QubitMapping::new(EncodingKind::JordanWigner, 2, 1, 1, true).is_err());
    }

    #[test]
    fn reference_state_reduction() {
        let m = QubitMapping::new(EncodingKind::Parity, 2, 1, 1, true).unwrap();
        // modes: up0, up1, down0, down1; occupation 0b0101 -> parity 0b0011 -> keep qubits 0 and 2
        assert_eq!(m.encoding.encode_state(0b0101), 0b0011);
        assert_eq!(m.map_basis_state(0b0101).unwrap(), 0b01);
    }
}
