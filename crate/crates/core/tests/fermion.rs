mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use tcvqe::fermion::fock::{
    matrix_element, matrix_in_basis, reference_determinant, singles_and_doubles, spin_sector_basis, to_fock_matrix,
};
use tcvqe::fermion::{slow, truncate_12, truncate_12_operator, wick_contract, FermionOperator};
use tcvqe::integrals::{IntegralSet, ReferenceTable, Symmetry};
use tcvqe::linalg::{dense_ground, dense_spectrum};

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().fold(0.0, |m, v| m.max(v.norm()))
}

#[test]
fn product_matches_matrix_product() {
    let mut rng = rng(1);
    for _ in 0..40 {
        let x = random_operator(&mut rng, 4, 6, 3);
        let y = random_operator(&mut rng, 4, 6, 3);
        let xy = x.multiply(&y).unwrap();
        let mx = to_fock_matrix(&x, None).unwrap();
        let my = to_fock_matrix(&y, None).unwrap();
        let mxy = to_fock_matrix(&xy, None).unwrap();
        assert!(max_diff(&mxy, &(&mx * &my)) < 1e-10);
    }
}

#[test]
fn commutator_matches_matrices() {
    let mut rng = rng(2);
    for _ in 0..40 {
        let x = random_operator(&mut rng, 4, 5, 2);
        let y = random_operator(&mut rng, 4, 5, 2);
        let c = x.commutator(&y).unwrap();
        let mx = to_fock_matrix(&x, None).unwrap();
        let my = to_fock_matrix(&y, None).unwrap();
        let want = &mx * &my - &my * &mx;
        assert!(max_diff(&to_fock_matrix(&c, None).unwrap(), &want) < 1e-10);
    }
}

#[test]
fn hermitian_operator_gives_hermitian_matrix() {
    let mut rng = rng(3);
    for _ in 0..10 {
        let x = hermitian_part(&random_operator(&mut rng, 5, 8, 2));
        let m = to_fock_matrix(&x, None).unwrap();
        assert!(max_diff(&m, &m.adjoint()) < 1e-12);
    }
}

#[test]
fn fast_and_slow_wick_agree() {
    let mut rng = rng(4);
    for reference in [0b0011u128, 0b0101, 0b1110] {
        for _ in 0..20 {
            let x = random_conserving(&mut rng, 4, 6, 3);
            let fast = wick_contract(&x, reference, 1.0);
            let slow = slow::normal_order(&x, reference);
            assert!(fast.max_abs_diff(&slow) < 1e-12);
        }
    }
}

#[test]
fn slow_path_normal_orders_raw_products() {
    // the slow path never forms the product, so this also checks `multiply`
    let mut rng = rng(5);
    for _ in 0..20 {
        let x = random_conserving(&mut rng, 5, 4, 2);
        let y = random_conserving(&mut rng, 5, 4, 2);
        let fast = wick_contract(&x.multiply(&y).unwrap(), 0b00110, 1.0);
        let slow = slow::normal_order_product(&x, &y, 0b00110);
        assert!(fast.max_abs_diff(&slow) < 1e-12);
    }
}

fn assert_low_excitations_preserved(x: &FermionOperator, reference: u128) {
    let n = x.n_modes();
    let t = truncate_12_operator(x, reference).unwrap();
    let (singles, doubles) = singles_and_doubles(reference, n);
    let mut targets = vec![reference];
    targets.extend(singles);
    targets.extend(doubles);
    for &d in &targets {
        let exact = matrix_element(x, d, reference);
        let trunc = matrix_element(&t, d, reference);
        assert!((exact - trunc).norm() < 1e-10, "bra {d:b}: {exact} vs {trunc}");
        let exact = matrix_element(x, reference, d);
        let trunc = matrix_element(&t, reference, d);
        assert!((exact - trunc).norm() < 1e-10);
    }
}

#[test]
fn truncation_preserves_reference_rows() {
    let mut rng = rng(6);
    for _ in 0..20 {
        let a = random_conserving(&mut rng, 4, 6, 2);
        let b = random_conserving(&mut rng, 4, 6, 2);
        let x = a.commutator(&b).unwrap();
        assert_low_excitations_preserved(&x, 0b0011);
        assert_low_excitations_preserved(&x, 0b0101);
    }
    // three-body pieces survive in the exact operator but not after truncation
    let a = random_conserving(&mut rng, 6, 12, 2);
    let b = random_conserving(&mut rng, 6, 12, 2);
    let x = a.commutator(&b).unwrap();
    assert!(x.max_rank() >= 3);
    assert_low_excitations_preserved(&x, 0b001011);
}

#[test]
fn scalar_is_reference_expectation() {
    let mut rng = rng(7);
    for _ in 0..20 {
        let x = hermitian_part(&random_conserving(&mut rng, 6, 15, 3));
        let d = truncate_12(&x, 0b000111).unwrap();
        let e = matrix_element(&x, 0b000111, 0b000111);
        assert!((d.scalar - e).norm() < 1e-12);
        assert!(d.hermiticity_error() < 1e-12);
    }
}

#[test]
fn truncation_is_projection() {
    let mut rng = rng(8);
    for _ in 0..10 {
        let x = random_conserving(&mut rng, 5, 10, 3);
        let once = truncate_12_operator(&x, 0b00011).unwrap();
        let twice = truncate_12_operator(&once, 0b00011).unwrap();
        assert!(twice.max_abs_diff(&once) < 1e-12);
        let d = truncate_12(&x, 0b00011).unwrap();
        assert!(d.to_operator().max_abs_diff(&once) < 1e-12);
        let slow = slow::truncate_12_normal(&x, 0b00011);
        assert!(d.to_normal_ordered().max_abs_diff(&slow) < 1e-12);
    }
}

#[test]
fn two_body_tensor_is_antisymmetric() {
    let mut rng = rng(9);
    let x = random_conserving(&mut rng, 4, 20, 2);
    let d = truncate_12(&x, 0b0011).unwrap();
    for p in 0..4 {
        for q in 0..4 {
            for r in 0..4 {
                for s in 0..4 {
                    assert_eq!(d.two([p, q, r, s]), -d.two([q, p, r, s]));
                    assert_eq!(d.two([p, q, r, s]), -d.two([p, q, s, r]));
                }
            }
        }
    }
}

#[test]
fn h2_ground_state_is_fci() {
    let ints = h2_631g();
    assert_eq!(ints.n_orb, 4);
    let op = FermionOperator::from_spatial(&ints);
    let m = to_fock_matrix(&op, Some(2)).unwrap();
    let (e, _) = dense_ground(&m).unwrap();
    let table = ReferenceTable::load(fixture("h2_631g/reference.csv")).unwrap();
    let fci = table.total("H2", "6-31G", 0.74, "fci").unwrap();
    let ccsd = table.total("H2", "6-31G", 0.74, "ccsd").unwrap();
    assert!((e - fci).abs() < 1e-8, "{e} vs {fci}");
    assert!((e - ccsd).abs() < 1e-7);
    // reference determinant reproduces RHF
    let rhf = table.total("H2", "6-31G", 0.74, "rhf").unwrap();
    let det = reference_determinant(4, 1, 1);
    assert!((matrix_element(&op, det, det).re - rhf).abs() < 1e-8);
    assert!((ints.reference_energy() - rhf).abs() < 1e-8);
}

#[test]
fn four_fold_differs_from_symmetrized() {
    let mut rng = rng(10);
    use rand::Rng;
    let mut ints = IntegralSet::zeros(2, 2, Symmetry::FourFold);
    for p in 0..2 {
        for q in 0..2 {
            for r in 0..2 {
                for s in 0..2 {
                    let idx = [p, q, r, s];
                    if Symmetry::FourFold.canonical(idx) == idx {
                        let v = rng.random_range(-1.0..1.0);
                        for o in Symmetry::FourFold.orbit(idx) {
                            ints.g[o] = v;
                        }
                    }
                }
            }
        }
    }
    let sym = ints.symmetrize_eightfold();
    let basis = spin_sector_basis(2, 1, 1);
    let a = matrix_in_basis(&FermionOperator::from_spatial(&ints), &basis);
    let b = matrix_in_basis(&FermionOperator::from_spatial(&sym), &basis);
    assert!(max_diff(&a, &b) > 1e-6);
    // an already 8-fold tensor is unchanged
    let c = matrix_in_basis(&FermionOperator::from_spatial(&sym.symmetrize_eightfold()), &basis);
    assert!(max_diff(&b, &c) < 1e-14);
    let _ = dense_spectrum(&a);
}
