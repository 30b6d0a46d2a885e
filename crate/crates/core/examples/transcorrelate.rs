//! Transcorrelates the synthetic H2 extended-space set and compares the
//! result with the plain orbital-basis block of the same integrals.
//!
//! Usage: `transcorrelate [EXT GEMINAL [OUT.tcdump]]`

use tcvqe::driver::{map_hamiltonian, RunOptions};
use tcvqe::integrals::{parse_extended, parse_geminal, symmetry_violation, write_tcdump, Symmetry};
use tcvqe::transcorrelation::transform_files;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/synthetic");
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ext_path = args.first().cloned().unwrap_or(format!("{dir}/h2_631g_aux2.fcidump"));
    let gem_path = args.get(1).cloned().unwrap_or(format!("{dir}/h2_631g_aux2.geminal"));

    let ext = parse_extended(&std::fs::read_to_string(&ext_path)?)?;
    let gem = parse_geminal(&std::fs::read_to_string(&gem_path)?)?;
    println!(
        "extended space: {} orbitals ({} in the orbital basis, {} occupied), gamma = {}",
        ext.n_ext(),
        ext.n_obs,
        ext.n_occ,
        gem.gamma
    );
    let ct = transform_files(&ext, &gem)?;
    let plain = ext.base.leading_block(ext.n_obs);

    let opts = RunOptions::default();
    let (_, s_plain) = map_hamiltonian(&plain, &opts)?;
    let (_, s_ct) = map_hamiltonian(&ct.ints, &opts)?;
    println!(
        "{:>14} {:>16} {:>12} {:>12} {:>8}",
        "", "<Phi|H|Phi>", "4-fold dev", "8-fold dev", "Paulis"
    );
    for (label, ints, s) in [("regular", &plain, &s_plain), ("transcorrelated", &ct.ints, &s_ct)] {
        println!(
            "{label:>14} {:16.10} {:12.1e} {:12.1e} {:8}",
            ints.reference_energy(),
            symmetry_violation(&ints.g, Symmetry::FourFold),
            symmetry_violation(&ints.g, Symmetry::EightFold),
            s.paulis
        );
    }
    if let Some(out) = args.get(2) {
        std::fs::write(out, write_tcdump(&ct.ints))?;
        println!("wrote {out}");
    }
    Ok(())
}
