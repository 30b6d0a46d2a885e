#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use tcvqe::fermion::FermionOperator;
use tcvqe::integrals::{parse_fcidump, IntegralSet};

pub fn fixtures() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

pub fn load(rel: &str) -> IntegralSet {
    let text = std::fs::read_to_string(fixture(rel)).unwrap();
    parse_fcidump(&text).unwrap()
}

pub fn h2_631g() -> IntegralSet {
    load("h2_631g/h2_631g_0.7400.fcidump")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_c(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random operator with `n_terms` strings of up to `max_rank` creators/annihilators.
pub fn random_operator(rng: &mut impl Rng, n_modes: usize, n_terms: usize, max_rank: usize) -> FermionOperator {
    let mut op = FermionOperator::zero(n_modes);
    for _ in 0..n_terms {
        let k = rng.random_range(0..=max_rank);
        let l = rng.random_range(0..=max_rank);
        let cr: Vec<usize> = (0..k).map(|_| rng.random_range(0..n_modes)).collect();
        let an: Vec<usize> = (0..l).map(|_| rng.random_range(0..n_modes)).collect();
        op.add_product(&cr, &an, rand_c(rng));
    }
    op.compressed()
}

/// Random number-conserving operator with ranks up to `max_rank`.
pub fn random_conserving(rng: &mut impl Rng, n_modes: usize, n_terms: usize, max_rank: usize) -> FermionOperator {
    let mut op = FermionOperator::zero(n_modes);
    for _ in 0..n_terms {
        let k = rng.random_range(0..=max_rank);
        let cr: Vec<usize> = (0..k).map(|_| rng.random_range(0..n_modes)).collect();
        let an: Vec<usize> = (0..k).map(|_| rng.random_range(0..n_modes)).collect();
        op.add_product(&cr, &an, rand_c(rng));
    }
    op.compressed()
}

pub fn hermitian_part(op: &FermionOperator) -> FermionOperator {
    (op.clone() + op.adjoint()).scale_real(0.5)
}

/// Random real 8-fold symmetric integral set.
pub fn random_integrals(rng: &mut impl Rng, n: usize, n_elec: usize) -> IntegralSet {
    use tcvqe::integrals::Symmetry;
    let mut ints = IntegralSet::zeros(n, n_elec, Symmetry::EightFold);
    for p in 0..n {
        for q in 0..=p {
            // diagonal dominance keeps orbital energies ordered
            let v = if p == q {
                -1.0 + 0.5 * p as f64
            } else {
                0.1 * rng.random_range(-1.0..1.0)
            };
            ints.h[[p, q]] = v;
            ints.h[[q, p]] = v;
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let idx = [p, q, r, s];
                    if Symmetry::EightFold.canonical(idx) != idx {
                        continue;
                    }
                    let v = if p == q && r == s {
                        0.5 + 0.1 * rng.random_range(0.0..1.0)
                    } else {
                        0.05 * rng.random_range(-1.0..1.0)
                    };
                    for o in Symmetry::EightFold.orbit(idx) {
                        ints.g[o] = v;
                    }
                }
            }
        }
    }
    ints.e_core = 0.7;
    ints
}

/// Seeded synthetic extended system with a random geminal.
pub fn synthetic_system(
    seed: u64,
    n_ext: usize,
    n_obs: usize,
    n_occ: usize,
) -> (tcvqe::integrals::ExtendedIntegralSet, tcvqe::integrals::GeminalTensor) {
    use tcvqe::integrals::{ExtendedIntegralSet, GeminalTensor};
    let mut rng = rng(seed);
    let base = random_integrals(&mut rng, n_ext, 2 * n_occ);
    let ext = ExtendedIntegralSet::new(base, n_obs, n_occ).unwrap();
    let mut gem = GeminalTensor::zeros(n_ext, n_obs, n_occ, 1.0);
    for a in 0..n_ext {
        for b in 0..n_ext {
            if !gem.allowed_pair(a, b) {
                continue;
            }
            for i in 0..n_occ {
                for j in 0..n_occ {
                    gem.r[[a, b, i, j]] = 0.2 * rng.random_range(-1.0..1.0);
                }
            }
        }
    }
    // <ab|f|ij> = <ba|f|ji>
    for a in 0..n_ext {
        for b in 0..a {
            for i in 0..n_occ {
                for j in 0..n_occ {
                    let v = gem.r[[a, b, i, j]];
                    gem.r[[b, a, j, i]] = v;
                }
            }
        }
    }
    (ext, gem)
}
