mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use tcvqe::fermion::fock::{matrix_in_basis, sector_basis, singles_and_doubles};
use tcvqe::fermion::FermionOperator;
use tcvqe::integrals::{parse_extended, parse_geminal, parse_tcdump, symmetry_violation, write_tcdump, Symmetry};
use tcvqe::linalg::dense_ground;
use tcvqe::transcorrelation::*;

/// Determinant over the orbital basis (`2 n_obs` modes) embedded in the extended layout.
fn embed(det: u128, n_obs: usize, n_ext: usize) -> u128 {
    let up = det & ((1 << n_obs) - 1);
    let down = det >> n_obs;
    up | (down << n_ext)
}

fn dense_oracle(seed: u64, n_ext: usize, n_obs: usize, n_occ: usize) {
    let (ext, gem) = synthetic_system(seed, n_ext, n_obs, n_occ);
    let amps = assemble_geminal_amplitudes(&gem);
    let ct = ct_transform(&ext, &amps).unwrap();

    // untruncated similarity expansion with dense matrices in the extended sector
    let n_elec = 2 * n_occ;
    let basis = sector_basis(2 * n_ext, n_elec);
    let mh = matrix_in_basis(&FermionOperator::from_spatial(&ext.base), &basis);
    let ma = matrix_in_basis(&build_a(&amps), &basis);
    let mf = matrix_in_basis(&one_body_operator(&build_fock(&ext).unwrap()), &basis);
    let comm = |x: &DMatrix<Complex64>, y: &DMatrix<Complex64>| x * y - y * x;
    let oracle = &mh + comm(&mh, &ma) + comm(&comm(&mf, &ma), &ma) * Complex64::new(0.5, 0.0);

    let obs_op = FermionOperator::from_spatial(&ct.ints);
    let reference = reference_mask(n_obs, n_occ);
    let (singles, doubles) = singles_and_doubles(reference, 2 * n_obs);
    let mut targets = vec![reference];
    targets.extend(singles);
    targets.extend(doubles);
    let obs_basis: Vec<u128> = targets.clone();
    let ours = matrix_in_basis(&obs_op, &obs_basis);
    let pos = |d: u128| basis.iter().position(|&b| b == embed(d, n_obs, n_ext)).unwrap();
    let r_ext = pos(reference);
    for (k, &d) in targets.iter().enumerate() {
        let want = oracle[(pos(d), r_ext)];
        let got = ours[(k, 0)];
        assert!((want - got).norm() < 1e-9, "seed {seed} det {d:b}: {want} vs {got}");
        let want = oracle[(r_ext, pos(d))];
        let got = ours[(0, k)];
        assert!((want - got).norm() < 1e-9);
    }
}

#[test]
fn matches_dense_oracle_one_occupied() {
    for seed in 0..3 {
        dense_oracle(seed, 5, 3, 1);
    }
}

#[test]
fn matches_dense_oracle_two_occupied() {
    dense_oracle(11, 5, 3, 2);
}

#[test]
fn zero_geminal_is_identity() {
    let (ext, gem) = synthetic_system(3, 5, 3, 1);
    let amps = assemble_geminal_amplitudes(&gem).zeros_like();
    let ct = ct_transform(&ext, &amps).unwrap();
    let obs = ext.base.leading_block(3);
    assert_eq!(ct.ints.h, obs.h);
    assert_eq!(ct.ints.g, obs.g);
    assert_eq!(ct.ints.e_core, obs.e_core);
    assert_eq!(ct.ints.symmetry, Symmetry::FourFold);
}

#[test]
fn hermitian_and_four_fold() {
    for seed in 20..23 {
        let (ext, gem) = synthetic_system(seed, 5, 3, 1);
        let amps = assemble_geminal_amplitudes(&gem);
        let op = transformed_operator(&ext, &amps).unwrap();
        assert!(op.is_hermitian(1e-10));
        let ct = ct_transform(&ext, &amps).unwrap();
        assert!(ct.ints.h.asymmetry() < 1e-10);
        assert_eq!(symmetry_violation(&ct.ints.g, Symmetry::FourFold), 0.0);
        // generically not 8-fold
        assert!(symmetry_violation(&ct.ints.g, Symmetry::EightFold) > 1e-6);
    }
}

#[test]
fn amplitude_scaling_orders() {
    let (ext, gem) = synthetic_system(5, 5, 3, 1);
    let amps = assemble_geminal_amplitudes(&gem);
    let base = ct_transform(&ext, &amps.zeros_like()).unwrap().ints;
    let shift = |eps: f64| {
        let ints = ct_transform(&ext, &amps.scaled(eps)).unwrap().ints;
        let mut v: Vec<f64> = ints
            .h
            .as_slice()
            .iter()
            .zip(base.h.as_slice())
            .map(|(a, b)| a - b)
            .collect();
        v.extend(ints.g.as_slice().iter().zip(base.g.as_slice()).map(|(a, b)| a - b));
        v.push(ints.e_core - base.e_core);
        v
    };
    let eps = 1e-2;
    let (t1, t2, t4) = (shift(eps), shift(2.0 * eps), shift(4.0 * eps));
    // T(e) = e L + e^2 Q exactly, so second differences scale by 4
    let q1: Vec<f64> = t2.iter().zip(&t1).map(|(b, a)| b - 2.0 * a).collect();
    let q2: Vec<f64> = t4.iter().zip(&t2).map(|(b, a)| b - 2.0 * a).collect();
    let n1 = q1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let n2 = q2.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(n1 > 0.0);
    assert!((n2 / n1 - 4.0).abs() < 1e-4, "ratio {}", n2 / n1);
    // the linear coefficient is the same from either pair of points
    let l1: Vec<f64> = t1.iter().zip(&t2).map(|(a, b)| (4.0 * a - b) / (2.0 * eps)).collect();
    let l2: Vec<f64> = t2.iter().zip(&t4).map(|(a, b)| (4.0 * a - b) / (4.0 * eps)).collect();
    let scale = l1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(scale > 0.0);
    let diff = l1.iter().zip(&l2).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(diff < 1e-8 * scale.max(1.0), "{diff}");
}

#[test]
fn ground_energy_is_continuous_in_amplitude() {
    let (ext, gem) = synthetic_system(6, 5, 3, 1);
    let amps = assemble_geminal_amplitudes(&gem);
    let basis = sector_basis(6, 2);
    let energy = |eps: f64| {
        let ct = ct_transform(&ext, &amps.scaled(eps)).unwrap();
        dense_ground(&matrix_in_basis(&FermionOperator::from_spatial(&ct.ints), &basis))
            .unwrap()
            .0
    };
    let g_norm = amps.g.max_abs();
    let h_norm = ext
        .base
        .g
        .max_abs()
        .max(ext.base.h.as_slice().iter().fold(0.0, |m: f64, v| m.max(v.abs())));
    let step = 0.05;
    let mut prev = energy(0.0);
    for k in 1..=10 {
        let e = energy(k as f64 * step);
        assert!((e - prev).abs() < 10.0 * step * g_norm * h_norm);
        prev = e;
    }
}

#[test]
fn synthetic_fixture_round_trip() {
    let ext = parse_extended(&std::fs::read_to_string(fixture("synthetic/h2_631g_aux2.fcidump")).unwrap()).unwrap();
    let gem = parse_geminal(&std::fs::read_to_string(fixture("synthetic/h2_631g_aux2.geminal")).unwrap()).unwrap();
    assert_eq!((ext.n_ext(), ext.n_obs, ext.n_occ), (6, 4, 1));
    let ct = transform_files(&ext, &gem).unwrap();
    assert_eq!(ct.ints.n_orb, 4);
    assert_eq!(ct.gamma, 0.7);
    let back = parse_tcdump(&write_tcdump(&ct.ints)).unwrap();
    assert!(back.h.max_abs_diff(&ct.ints.h) < 1e-12);
    assert!(back.g.max_abs_diff(&ct.ints.g) < 1e-12);
    // the committed transformed dump is reproduced
    let committed = parse_tcdump(&std::fs::read_to_string(fixture("synthetic/h2_631g_aux2.tcdump")).unwrap()).unwrap();
    assert_eq!(committed.symmetry, Symmetry::FourFold);
    assert_eq!(committed.n_orb, 4);
    assert!(committed.g.max_abs_diff(&ct.ints.g) < 1e-12);
    assert!((committed.e_core - ct.ints.e_core).abs() < 1e-12);
}
