//! Orbital, qubit and UCCSD parameter counts for the catalog of molecules,
//! followed by compiled-circuit gate counts for the committed 6-31G fixtures.

use tcvqe::ansatz::uccsd_parameter_count;
use tcvqe::driver::{resources, RunOptions};
use tcvqe::integrals::parse_dump;
use tcvqe::pauli::{EncodingKind, QubitMapping};
use tcvqe::systems::system;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("species,basis,orbitals,qubits_jw,qubits_parity_reduced,parameters");
    for species in ["H2", "H3+", "LiH", "BH", "HF"] {
        for basis in ["6-31G", "cc-pVDZ", "cc-pVTZ"] {
            let s = system(species, basis)?;
            let jw = QubitMapping::new(EncodingKind::JordanWigner, s.n_orb, s.n_alpha, s.n_beta, false)?;
            let red = QubitMapping::new(EncodingKind::Parity, s.n_orb, s.n_alpha, s.n_beta, true)?;
            println!(
                "{species},{basis},{},{},{},{}",
                s.n_orb,
                jw.n_qubits(),
                red.n_qubits(),
                uccsd_parameter_count(s.n_orb, s.n_alpha, s.n_beta)
            );
        }
    }

    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
    println!();
    println!("fixture,encoding,qubits,parameters,operations,cnots,depth");
    for file in [
        "h2_631g/h2_631g_0.7400.fcidump",
        "synthetic/h2_631g_aux2.tcdump",
        "h3p_631g_tri/h3p_631g_tri_0.8600.fcidump",
        "lih_631g/lih_631g_1.6200.fcidump",
        "bh_631g/bh_631g_1.2500.fcidump",
        "hf_631g/hf_631g_0.9300.fcidump",
    ] {
        let Ok(text) = std::fs::read_to_string(format!("{root}/{file}")) else {
            println!("{file},missing");
            continue;
        };
        let ints = parse_dump(&text)?;
        for (label, encoding, reduce) in [
            ("jw", EncodingKind::JordanWigner, false),
            ("parity", EncodingKind::Parity, true),
        ] {
            let opts = RunOptions {
                encoding,
                two_qubit_reduction: reduce,
                ..RunOptions::default()
            };
            let r = resources(&ints, &opts)?;
            println!("{file},{label},{}", r.csv_row());
        }
    }
    Ok(())
}
