mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use tcvqe::ansatz::*;
use tcvqe::fermion::FermionOperator;
use tcvqe::integrals::ReferenceTable;
use tcvqe::pauli::{EncodingKind, PauliString, QubitMapping};
use tcvqe::simulator::*;
use tcvqe::vqe::*;

fn dense_exp(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    // scaling and squaring with a long Taylor series
    let norm: f64 = m.iter().map(|v| v.norm()).sum();
    let s = norm.log2().ceil().max(0.0) as u32 + 1;
    let a = m / Complex64::new(2f64.powi(s as i32), 0.0);
    let n = m.nrows();
    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..30 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn h2_setup(kind: EncodingKind, reduce: bool) -> (FermionOperator, QubitMapping, AnsatzCircuit) {
    let op = FermionOperator::from_spatial(&h2_631g());
    let map = QubitMapping::new(kind, 4, 1, 1, reduce).unwrap();
    let circ = build_ansatz(&enumerate_uccsd(4, 1, 1), &map, 1).unwrap();
    (op, map, circ)
}

#[test]
fn pauli_exponential_matches_dense() {
    let mut rng = rng(40);
    for w in 1..=4 {
        let mut label = String::new();
        for _ in 0..w {
            label.push(['X', 'Y', 'Z'][rng.random_range(0..3)]);
        }
        let p = PauliString::from_label(&label).unwrap();
        let mut gates = Vec::new();
        compile_pauli_exponential(&p, 0, 1.0, &mut gates);
        let cnots = gates.iter().filter(|g| g.kind == GateKind::Cnot).count();
        assert_eq!(cnots, 2 * (w - 1));
        let phi = 0.731;
        let want = dense_exp(&(p.matrix(w) * Complex64::new(0.0, phi)));
        for b in 0..1u128 << w {
            let mut psi = StateVector::basis(w, b).unwrap();
            for g in &gates {
                psi.apply_gate(g, &[phi]);
            }
            let col: Vec<Complex64> = want.column(b as usize).iter().copied().collect();
            assert!(max_diff(&psi.amps, &col) < 1e-12, "{label}");
        }
    }
}

#[test]
fn circuit_equals_product_of_block_exponentials() {
    let (_, _, circ) = h2_setup(EncodingKind::Parity, true);
    let mut rng = rng(41);
    let theta: Vec<f64> = (0..circ.n_params).map(|_| rng.random_range(-0.5..0.5)).collect();
    let dim = 1 << circ.n_qubits;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for b in &circ.blocks {
        let g = b.generator(circ.n_qubits).matrix() * Complex64::new(theta[b.param], 0.0);
        u = dense_exp(&g) * u;
    }
    for basis in [0u128, 5, 17, 42] {
        let psi = StateVector::basis(circ.n_qubits, basis).unwrap();
        let out = apply_ansatz(&circ, &theta, &psi, AnsatzPath::Gates).unwrap();
        let col: Vec<Complex64> = u.column(basis as usize).iter().copied().collect();
        assert!(max_diff(&out.amps, &col) < 1e-10);
    }
}

#[test]
fn ansatz_paths_agree() {
    let mut rng = rng(42);
    for (kind, reduce) in [(EncodingKind::JordanWigner, false), (EncodingKind::Parity, true)] {
        let (_, map, circ) = h2_setup(kind, reduce);
        let psi = prepare_reference(&map).unwrap();
        for _ in 0..5 {
            let theta: Vec<f64> = (0..circ.n_params).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a = apply_ansatz(&circ, &theta, &psi, AnsatzPath::Gates).unwrap();
            let b = apply_ansatz(&circ, &theta, &psi, AnsatzPath::Blocks).unwrap();
            let c = apply_ansatz(&circ, &theta, &psi, AnsatzPath::Rotations).unwrap();
            assert!(max_diff(&a.amps, &b.amps) < 1e-10);
            assert!(max_diff(&a.amps, &c.amps) < 1e-10);
        }
        let zero = apply_ansatz(&circ, &vec![0.0; circ.n_params], &psi, AnsatzPath::Gates).unwrap();
        assert!(max_diff(&zero.amps, &psi.amps) < 1e-13);
        assert!(apply_ansatz(&circ, &[0.0], &psi, AnsatzPath::Gates).is_err());
    }
}

#[test]
fn full_gate_list_runs_from_vacuum() {
    let mut rng = rng(44);
    for (kind, reduce) in [(EncodingKind::JordanWigner, false), (EncodingKind::Parity, true)] {
        let (_, map, circ) = h2_setup(kind, reduce);
        let theta: Vec<f64> = (0..circ.n_params).map(|_| rng.random_range(-1.0..1.0)).collect();
        let want = apply_ansatz(&circ, &theta, &prepare_reference(&map).unwrap(), AnsatzPath::Gates).unwrap();
        let mut psi = StateVector::basis(circ.n_qubits, 0).unwrap();
        for g in circ.all_gates() {
            psi.apply_gate(&g, &theta);
        }
        assert!(max_diff(&psi.amps, &want.amps) < 1e-12);
        let prep = circ.preparation();
        assert_eq!(prep.len(), circ.reference.count_ones() as usize);
        assert_eq!(circ.resources().operations, circ.gates.len() + prep.len());
    }
}

#[test]
fn norm_is_preserved() {
    let (_, map, circ) = h2_setup(EncodingKind::Parity, true);
    let psi = prepare_reference(&map).unwrap();
    let mut rng = rng(43);
    for _ in 0..1000 {
        let theta: Vec<f64> = (0..circ.n_params).map(|_| rng.random_range(-3.0..3.0)).collect();
        let out = apply_ansatz(&circ, &theta, &psi, AnsatzPath::Rotations).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn reference_states() {
    let jw = QubitMapping::new(EncodingKind::JordanWigner, 2, 1, 1, false).unwrap();
    let par = QubitMapping::new(EncodingKind::Parity, 2, 1, 1, false).unwrap();
    // occupation (x0, x1, x2, x3) = (1, 1, 0, 0): JW |1100>, parity prefix sums |1000>
    assert_eq!(jw.encoding.encode_state(0b0011), 0b0011);
    assert_eq!(par.encoding.encode_state(0b0011), 0b0001);
    let psi = prepare_reference(&jw).unwrap();
    assert_eq!(psi.amps[0b0101], Complex64::new(1.0, 0.0));
}

#[test]
fn reference_energy_is_rhf_and_ground_is_fci() {
    let table = ReferenceTable::load(fixture("h2_631g/reference.csv")).unwrap();
    let rhf = table.total("H2", "6-31G", 0.74, "rhf").unwrap();
    let ccsd = table.total("H2", "6-31G", 0.74, "ccsd").unwrap();
    let mut grounds = Vec::new();
    for (kind, reduce) in [
        (EncodingKind::JordanWigner, false),
        (EncodingKind::Parity, false),
        (EncodingKind::Parity, true),
    ] {
        let (op, map, _) = h2_setup(kind, reduce);
        let ps = map.map_hamiltonian(&op).unwrap();
        let psi = prepare_reference(&map).unwrap();
        assert!((psi.expectation(&ps).unwrap() - rhf).abs() < 1e-8);
        let basis: Vec<u128> = tcvqe::fermion::fock::spin_sector_basis(4, 1, 1)
            .into_iter()
            .map(|d| map.map_basis_state(d).unwrap())
            .collect();
        grounds.push(exact_ground_pauli(&ps, Some(&basis)).unwrap().0);
    }
    for g in &grounds {
        assert!((g - ccsd).abs() < 1e-7);
        assert!((g - grounds[0]).abs() < 1e-10);
    }
    let (op, _, _) = h2_setup(EncodingKind::JordanWigner, false);
    let (e, _) = exact_ground_fermion(&op, 4, 1, 1).unwrap();
    assert!((e - grounds[0]).abs() < 1e-10);
}

#[test]
fn expectation_matches_dense_quadratic_form() {
    let mut rng = rng(44);
    let op = hermitian_part(&random_conserving(&mut rng, 5, 20, 2));
    let map = QubitMapping::new(EncodingKind::Parity, 3, 1, 1, false).unwrap();
    let ps = map.map_operator(&op.with_modes(6)).unwrap();
    let dim = 1 << ps.n_qubits;
    let amps: Vec<Complex64> = (0..dim).map(|_| rand_c(&mut rng)).collect();
    let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps: Vec<Complex64> = amps.into_iter().map(|a| a / n).collect();
    let psi = StateVector::from_amplitudes(ps.n_qubits, amps.clone()).unwrap();
    let v = tcvqe::linalg::to_dvector(&amps);
    let want = (v.adjoint() * ps.matrix() * &v)[(0, 0)];
    assert!((psi.expectation(&ps).unwrap() - want.re).abs() < 1e-10);
}

#[test]
fn variational_bound_holds() {
    let (op, map, circ) = h2_setup(EncodingKind::Parity, true);
    let ps = map.map_hamiltonian(&op).unwrap();
    let problem = VqeProblem::new(ps, circ, prepare_reference(&map).unwrap()).unwrap();
    let (exact, _) = exact_ground_fermion(&op, 4, 1, 1).unwrap();
    let mut rng = rng(45);
    for _ in 0..100 {
        let theta: Vec<f64> = (0..problem.n_params()).map(|_| rng.random_range(-1.0..1.0)).collect();
        assert!(problem.energy(&theta).unwrap() >= exact - 1e-12);
    }
}

#[test]
fn sector_engine_matches_qubit_engine() {
    let (op, map, circ) = h2_setup(EncodingKind::Parity, true);
    let ps = map.map_hamiltonian(&op).unwrap();
    let problem = VqeProblem::new(ps, circ, prepare_reference(&map).unwrap()).unwrap();
    let exc = enumerate_uccsd(4, 1, 1).ordered();
    let sector = SectorEngine::new(&op, 4, 1, 1, &exc, 1).unwrap();
    let mut rng = rng(46);
    for _ in 0..20 {
        let theta: Vec<f64> = (0..15).map(|_| rng.random_range(-1.5..1.5)).collect();
        let a = problem.energy(&theta).unwrap();
        let b = sector.energy(&theta).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn h2_vqe_reaches_fci() {
    let (op, map, circ) = h2_setup(EncodingKind::Parity, true);
    let ps = map.map_hamiltonian(&op).unwrap();
    let problem = VqeProblem::new(ps, circ, prepare_reference(&map).unwrap()).unwrap();
    let table = ReferenceTable::load(fixture("h2_631g/reference.csv")).unwrap();
    let rhf = table.total("H2", "6-31G", 0.74, "rhf").unwrap();
    assert!((problem.energy(&[0.0; 15]).unwrap() - rhf).abs() < 1e-8);

    let opts = VqeOptions::default();
    let r = minimize(&problem, &[0.0; 15], &opts).unwrap();
    let (exact, _) = exact_ground_fermion(&op, 4, 1, 1).unwrap();
    assert!(r.converged, "{}", r.message);
    assert!((r.energy - exact).abs() < 1e-6, "{} vs {exact}", r.energy);
    assert!((problem.energy(&r.theta).unwrap() - r.energy).abs() < 1e-12);
    assert!(r.history.windows(2).all(|w| w[1].energy <= w[0].energy));
    let g = gradient(&problem, &r.theta, 1e-6).unwrap();
    assert!(g.iter().all(|v| v.abs() < 1e-5));

    // restart from the optimum
    let again = minimize(&problem, &r.theta, &opts).unwrap();
    assert!(again.iterations <= 2);

    // zero-angle blocks do not change the energy
    let mut extra = problem.clone();
    let b = extra.circuit.blocks[0].clone();
    extra.circuit.blocks.push(Block { param: 15, ..b });
    extra.circuit.n_params = 16;
    let mut t = r.theta.clone();
    t.push(0.0);
    assert!((extra.energy(&t).unwrap() - r.energy).abs() < 1e-12);
}

#[test]
fn finite_difference_step_halving() {
    let (op, _, _) = h2_setup(EncodingKind::Parity, true);
    let exc = enumerate_uccsd(4, 1, 1).ordered();
    let sector = SectorEngine::new(&op, 4, 1, 1, &exc, 1).unwrap();
    let mut rng = rng(47);
    let theta: Vec<f64> = (0..15).map(|_| rng.random_range(-0.5..0.5)).collect();
    let reference = gradient(&sector, &theta, 1e-3 / 8.0).unwrap();
    let g1 = gradient(&sector, &theta, 1e-2).unwrap();
    let g2 = gradient(&sector, &theta, 5e-3).unwrap();
    let e1: f64 = g1
        .iter()
        .zip(&reference)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let e2: f64 = g2
        .iter()
        .zip(&reference)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let ratio = e1 / e2;
    assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
}

#[test]
fn counters_are_monotone() {
    let map = QubitMapping::new(EncodingKind::Parity, 4, 1, 1, true).unwrap();
    let full = enumerate_uccsd(4, 1, 1);
    let mut prev = ResourceReport {
        qubits: 6,
        parameters: 0,
        operations: 0,
        cnots: 0,
        depth: 0,
    };
    for k in 0..=full.len() {
        let ordered = full.ordered();
        let sub = ExcitationList {
            doubles: ordered[..k]
                .iter()
                .filter(|e| matches!(e, Excitation::Double { .. }))
                .copied()
                .collect(),
            singles: ordered[..k]
                .iter()
                .filter(|e| matches!(e, Excitation::Single { .. }))
                .copied()
                .collect(),
            ..full.clone()
        };
        let r = build_ansatz(&sub, &map, 1).unwrap().resources();
        assert!(r.parameters >= prev.parameters && r.operations >= prev.operations);
        assert!(r.cnots >= prev.cnots && r.depth >= prev.depth);
        prev = r;
    }
    assert_eq!(prev.parameters, 15);
}

#[test]
fn trotter_slices_share_parameters() {
    let map = QubitMapping::new(EncodingKind::JordanWigner, 4, 1, 1, false).unwrap();
    let one = build_ansatz(&enumerate_uccsd(4, 1, 1), &map, 1).unwrap();
    let two = build_ansatz(&enumerate_uccsd(4, 1, 1), &map, 2).unwrap();
    assert_eq!(two.n_params, one.n_params);
    assert_eq!(two.gates.len(), 2 * one.gates.len());
}
