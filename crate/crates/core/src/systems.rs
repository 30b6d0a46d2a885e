//! Species and basis-set bookkeeping: orbital, electron and qubit counts.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SystemError {
    #[error("unknown species '{0}'")]
    Species(String),
    #[error("unknown basis '{basis}' for element {element}")]
    Basis { element: String, basis: String },
}

/// Atomic masses of the most abundant isotopes, in u.
pub fn atomic_mass(element: &str) -> Option<f64> {
    Some(match element {
        "H" => 1.00783,
        "Li" => 7.01600,
        "B" => 11.00931,
        "F" => 18.99840,
        _ => return None,
    })
}

fn atomic_number(element: &str) -> Option<usize> {
    Some(match element {
        "H" => 1,
        "Li" => 3,
        "B" => 5,
        "F" => 9,
        _ => return None,
    })
}

/// Contracted basis functions per atom (spherical harmonics).
pub fn basis_functions(element: &str, basis: &str) -> Result<usize, SystemError> {
    let b = normalize_basis(basis);
    let n = match (element, b.as_str()) {
        ("H", "6-31g") => 2,
        ("H", "cc-pvdz") => 5,
        ("H", "cc-pvtz") => 14,
        ("H", "cc-pvqz") => 30,
        ("H", "cc-pv5z") => 55,
        ("Li" | "B" | "F", "6-31g") => 9,
        ("Li" | "B" | "F", "cc-pvdz") => 14,
        ("Li" | "B" | "F", "cc-pvtz") => 30,
        _ => {
            return Err(SystemError::Basis {
                element: element.into(),
                basis: basis.into(),
            });
        }
    };
    Ok(n)
}

fn normalize_basis(basis: &str) -> String {
    basis.trim().to_ascii_lowercase()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemInfo {
    pub species: String,
    pub basis: String,
    pub atoms: Vec<&'static str>,
    pub charge: i32,
    /// Core orbitals removed by the frozen-core approximation.
    pub n_frozen: usize,
    /// Active spatial orbitals.
    pub n_orb: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
}

impl SystemInfo {
    pub fn jw_qubits(&self) -> usize {
        2 * self.n_orb
    }

    pub fn parity_reduced_qubits(&self) -> usize {
        2 * self.n_orb - 2
    }

    /// Reduced mass of a diatomic, in u.
    pub fn reduced_mass(&self) -> Option<f64> {
        match self.atoms.as_slice() {
            [a, b] => {
                let (ma, mb) = (atomic_mass(a)?, atomic_mass(b)?);
                Some(ma * mb / (ma + mb))
            }
            _ => None,
        }
    }
}

/// Species labels accept conformer suffixes such as `H3+_tri`.
pub fn system(species: &str, basis: &str) -> Result<SystemInfo, SystemError> {
    let base = species.split('_').next().unwrap_or(species);
    let (atoms, charge): (Vec<&'static str>, i32) = match base {
        "H2" => (vec!["H", "H"], 0),
        "H3+" => (vec!["H", "H", "H"], 1),
        "LiH" => (vec!["Li", "H"], 0),
        "BH" => (vec!["B", "H"], 0),
        "HF" => (vec!["H", "F"], 0),
        _ => return Err(SystemError::Species(species.into())),
    };
    let mut n_basis = 0;
    let mut n_elec: i32 = -charge;
    let mut n_frozen = 0;
    for a in &atoms {
        n_basis += basis_functions(a, basis)?;
        let z = atomic_number(a).unwrap();
        n_elec += z as i32;
        // 1s core frozen for second-row atoms
        if z > 2 {
            n_frozen += 1;
        }
    }
    let active = n_elec as usize - 2 * n_frozen;
    Ok(SystemInfo {
        species: species.into(),
        basis: basis.into(),
        atoms,
        charge,
        n_frozen,
        n_orb: n_basis - n_frozen,
        n_alpha: active.div_ceil(2),
        n_beta: active / 2,
    })
}
