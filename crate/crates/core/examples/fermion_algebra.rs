//! Commutes the H2/6-31G Hamiltonian with a pair excitation, then keeps the
//! 0-, 1- and 2-body parts after normal ordering against the Hartree-Fock
//! determinant.

use num_complex::Complex64;
use std::collections::BTreeMap;
use tcvqe::fermion::fock::{matrix_element, reference_determinant};
use tcvqe::fermion::wick::truncate_12;
use tcvqe::fermion::FermionOperator;
use tcvqe::integrals::parse_fcidump;

/// Term counts keyed by body rank.
fn ranks(op: &FermionOperator) -> BTreeMap<usize, usize> {
    let mut n = BTreeMap::new();
    for (t, _) in op.terms() {
        let (c, a) = t.rank();
        *n.entry((c + a) / 2).or_insert(0) += 1;
    }
    n
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/h2_631g/h2_631g_0.7400.fcidump"
    );
    let ints = parse_fcidump(&std::fs::read_to_string(path)?)?;
    let m = ints.n_orb;
    let h = FermionOperator::from_spatial(&ints);
    let reference = reference_determinant(m, 1, 1);

    // A = t (c†_1a c†_1b c_0b c_0a - h.c.)
    let mut a = FermionOperator::zero(2 * m);
    a.add_product(&[1, m + 1], &[m, 0], Complex64::new(0.05, 0.0));
    let a = a.clone() - a.adjoint();
    let comm = h.commutator(&a)?;
    println!("H: {} terms, [H, A]: {} terms", h.len(), comm.len());
    println!("[H, A] terms by body rank: {:?}", ranks(&comm));

    let parts = truncate_12(&comm, reference)?;
    let kept = parts.to_operator();
    println!("after truncation: {} terms, by rank {:?}", kept.len(), ranks(&kept));
    println!("scalar part       = {:.12}", parts.scalar.re);
    println!(
        "<Phi|[H, A]|Phi>  = {:.12}",
        matrix_element(&comm, reference, reference).re
    );
    println!("hermiticity error = {:.2e}", parts.hermiticity_error());
    Ok(())
}
