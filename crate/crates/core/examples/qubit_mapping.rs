//! Maps the H2/6-31G Hamiltonian to qubits with both encodings, applies the
//! parity two-qubit reduction and Z2 tapering, and counts Pauli terms.

use std::path::PathBuf;
use tcvqe::fermion::FermionOperator;
use tcvqe::integrals::parse_fcidump;
use tcvqe::pauli::{EncodingKind, QubitMapping};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/h2_631g/h2_631g_0.7400.fcidump")
    });
    let ints = parse_fcidump(&std::fs::read_to_string(&path)?)?;
    let (n_up, n_down) = (ints.n_alpha(), ints.n_beta());
    let op = FermionOperator::from_spatial(&ints);
    println!("{}: {} orbitals, {} electrons", path.display(), ints.n_orb, ints.n_elec);

    for (label, kind, reduce) in [
        ("jordan-wigner", EncodingKind::JordanWigner, false),
        ("parity", EncodingKind::Parity, false),
        ("parity + reduction", EncodingKind::Parity, true),
    ] {
        let map = QubitMapping::new(kind, ints.n_orb, n_up, n_down, reduce)?;
        let ps = map.map_hamiltonian(&op)?;
        println!(
            "{label:>20}: {:3} qubits, {:5} Pauli terms (|c| > 1e-8)",
            ps.n_qubits,
            ps.count(1e-8)
        );
    }

    let mut map = QubitMapping::new(EncodingKind::Parity, ints.n_orb, n_up, n_down, true)?;
    let k = map.enable_tapering(&op)?;
    let ps = map.map_hamiltonian(&op)?;
    let (gens, sector) = map.generators();
    println!(
        "{:>20}: {:3} qubits, {:5} Pauli terms, {k} generators",
        "tapered",
        ps.n_qubits,
        ps.count(1e-8)
    );
    for (g, s) in gens.iter().zip(&sector) {
        println!("    {} -> {s:+}", g.label(map.untapered_qubits()));
    }
    Ok(())
}
