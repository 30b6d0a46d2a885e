//! Canonical transcorrelation with an explicitly correlated geminal generator.
//!
//! `H' = H + [H, A]_{12} + 1/2 [[F, A]_{12}, A]_{12}`, evaluated with the
//! operator engine on the extended orbital space, then sliced to the orbital
//! basis. `A = 1/2 sum G^{ab}_{ij} (E^{ab}_{ij} - E^{ij}_{ab})` with
//! `E^{ab}_{ij} = sum_{st} c†_{a s} c†_{b t} c_{j t} c_{i s}`.

use crate::bits::below;
use crate::fermion::{truncate_12_operator, FermionError, FermionOperator, Term};
use crate::integrals::{symmetrize, ExtendedIntegralSet, GeminalTensor, IntegralError, IntegralSet, Symmetry};
use crate::tensor::{Tensor2, Tensor4};
use num_complex::Complex64;
use thiserror::Error;

/// Largest imaginary part or spin asymmetry tolerated when reading back tensors.
const EXTRACT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TcError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("missing occupancy data: {0}")]
    Occupancy(String),
    #[error("transformed operator is not a real spin-free Hamiltonian: {0}")]
    Extraction(String),
    #[error(transparent)]
    Fermion(#[from] FermionError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
}

/// Geminal amplitudes `G^{ab}_{ij}`, indexed like [`GeminalTensor::r`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeminalAmplitudes {
    pub n_ext: usize,
    pub n_obs: usize,
    pub n_occ: usize,
    pub g: Tensor4,
}

impl GeminalAmplitudes {
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.g.map_inplace(|v| v * factor);
        out
    }

    pub fn zeros_like(&self) -> Self {
        self.scaled(0.0)
    }
}

/// The transformed Hamiltonian over the orbital basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CtHamiltonian {
    pub ints: IntegralSet,
    pub gamma: f64,
    pub source: String,
}

/// Closed-shell Fock matrix `f = h + sum_i 2 (pq|ii) - (pi|iq)`.
pub fn build_fock(ext: &ExtendedIntegralSet) -> Result<Tensor2, TcError> {
    let base = &ext.base;
    let n = base.n_orb;
    if ext.n_occ > n {
        return Err(TcError::Occupancy(format!("{} occupied of {n} orbitals", ext.n_occ)));
    }
    Ok(Tensor2::from_fn(n, n, |p, q| {
        let mut v = base.h[[p, q]];
        for i in 0..ext.n_occ {
            v += 2.0 * base.g[[p, q, i, i]] - base.g[[p, i, i, q]];
        }
        v
    }))
}

/// Spin-adapted amplitudes `G = 3/8 R_{ij} + 1/8 R_{ji}`.
pub fn assemble_geminal_amplitudes(r: &GeminalTensor) -> GeminalAmplitudes {
    let mut g = Tensor4::zeros(r.r.dims());
    for a in 0..r.n_ext {
        for b in 0..r.n_ext {
            for i in 0..r.n_occ {
                for j in 0..r.n_occ {
                    g[[a, b, i, j]] = 0.375 * r.r[[a, b, i, j]] + 0.125 * r.r[[a, b, j, i]];
                }
            }
        }
    }
    GeminalAmplitudes {
        n_ext: r.n_ext,
        n_obs: r.n_obs,
        n_occ: r.n_occ,
        g,
    }
}

/// Anti-Hermitian generator over `2 n_ext` spin orbitals.
pub fn build_a(amps: &GeminalAmplitudes) -> FermionOperator {
    let m = amps.n_ext;
    let mut op = FermionOperator::zero(2 * m);
    for a in 0..m {
        for b in 0..m {
            for i in 0..amps.n_occ {
                for j in 0..amps.n_occ {
                    let v = 0.5 * amps.g[[a, b, i, j]];
                    if v == 0.0 {
                        continue;
                    }
                    let v = Complex64::new(v, 0.0);
                    for s in [0, m] {
                        for t in [0, m] {
                            op.add_product(&[a + s, b + t], &[j + t, i + s], v);
                            op.add_product(&[i + s, j + t], &[b + t, a + s], -v);
                        }
                    }
                }
            }
        }
    }
    op.compressed()
}

/// One-body spin-free operator `sum f_pq E_pq`.
pub fn one_body_operator(f: &Tensor2) -> FermionOperator {
    let n = f.dims()[0];
    let mut op = FermionOperator::zero(2 * n);
    for p in 0..n {
        for q in 0..n {
            let v = f[[p, q]];
            if v != 0.0 {
                for s in [0, n] {
                    op.add_product(&[p + s], &[q + s], Complex64::new(v, 0.0));
                }
            }
        }
    }
    op
}

/// Closed-shell reference over `2 n_ext` modes with `n_occ` doubly occupied orbitals.
pub fn reference_mask(n_ext: usize, n_occ: usize) -> u128 {
    below(n_occ) | (below(n_occ) << n_ext)
}

fn check_compatible(ext: &ExtendedIntegralSet, amps: &GeminalAmplitudes) -> Result<(), TcError> {
    if amps.n_ext != ext.base.n_orb || amps.n_obs != ext.n_obs || amps.n_occ != ext.n_occ {
        return Err(TcError::Dimension(format!(
            "amplitudes (NEXT={}, NOBS={}, NOCC={}) vs integrals (NEXT={}, NOBS={}, NOCC={})",
            amps.n_ext, amps.n_obs, amps.n_occ, ext.base.n_orb, ext.n_obs, ext.n_occ
        )));
    }
    if ext.n_occ == 0 {
        return Err(TcError::Occupancy("no occupied orbitals".into()));
    }
    Ok(())
}

/// `H'` on the full extended space as a bare operator.
pub fn transformed_operator(ext: &ExtendedIntegralSet, amps: &GeminalAmplitudes) -> Result<FermionOperator, TcError> {
    check_compatible(ext, amps)?;
    let reference = reference_mask(ext.base.n_orb, ext.n_occ);
    let h = FermionOperator::from_spatial(&ext.base);
    let a = build_a(amps);
    if a.is_empty() {
        return Ok(h);
    }
    let fock = match &ext.fock {
        Some(f) => f.clone(),
        None => build_fock(ext)?,
    };
    let f = one_body_operator(&fock);
    let ha = truncate_12_operator(&h.commutator(&a)?, reference)?;
    let fa = truncate_12_operator(&f.commutator(&a)?, reference)?;
    let faa = truncate_12_operator(&fa.commutator(&a)?, reference)?;
    Ok(h + ha + faa.scale_real(0.5))
}

/// Reads `e_core`, `h` and `g` of a spin-free operator over the leading `n` orbitals.
///
/// `g` comes from the opposite-spin strings, which carry both `(pq|rs)` and
/// `(rs|pq)`; the result is averaged over its 4-fold orbits.
pub fn extract_spatial(op: &FermionOperator, n_orb_full: usize, n: usize) -> Result<(f64, Tensor2, Tensor4), TcError> {
    let m = n_orb_full;
    let real = |c: Complex64, what: &str| -> Result<f64, TcError> {
        if c.im.abs() > EXTRACT_TOL {
            return Err(TcError::Extraction(format!("{what} has imaginary part {:e}", c.im)));
        }
        Ok(c.re)
    };
    let e_core = real(op.coefficient(&Term::IDENTITY), "scalar")?;
    let mut h = Tensor2::square(n);
    for p in 0..n {
        for q in 0..n {
            let up = op.coefficient(&Term::new(1 << p, 1 << q));
            let down = op.coefficient(&Term::new(1 << (p + m), 1 << (q + m)));
            if (up - down).norm() > EXTRACT_TOL {
                return Err(TcError::Extraction(format!("one-body ({p},{q}) differs between spins")));
            }
            h[[p, q]] = real(up, "one-body element")?;
        }
    }
    let mut g = Tensor4::cube(n);
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let t = Term::new(1 << p | 1 << (r + m), 1 << q | 1 << (s + m));
                    g[[p, q, r, s]] = -real(op.coefficient(&t), "two-body element")?;
                }
            }
        }
    }
    let g = orbit_mean(&g);
    let h = Tensor2::from_fn(n, n, |p, q| {
        let (a, b) = (h[[p, q]], h[[q, p]]);
        if a == b {
            a
        } else {
            0.5 * (a + b)
        }
    });
    Ok((e_core, h, g))
}

// Orbit average that leaves already-symmetric entries bit-identical.
fn orbit_mean(g: &Tensor4) -> Tensor4 {
    let mut out = symmetrize(g, Symmetry::FourFold);
    let n = g.dims()[0];
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = g[[p, q, r, s]];
                    if Symmetry::FourFold.orbit([p, q, r, s]).iter().all(|&o| g[o] == v) {
                        out[[p, q, r, s]] = v;
                    }
                }
            }
        }
    }
    out
}

/// Transformed Hamiltonian restricted to the orbital basis.
pub fn ct_transform(ext: &ExtendedIntegralSet, amps: &GeminalAmplitudes) -> Result<CtHamiltonian, TcError> {
    let op = transformed_operator(ext, amps)?;
    let (e_core, h, g) = extract_spatial(&op, ext.base.n_orb, ext.n_obs)?;
    let ints = IntegralSet {
        n_orb: ext.n_obs,
        n_elec: ext.base.n_elec,
        ms2: 0,
        e_core,
        h,
        g,
        symmetry: Symmetry::FourFold,
        frozen_core: ext.base.frozen_core,
    };
    ints.validate()?;
    Ok(CtHamiltonian {
        ints,
        gamma: 0.0,
        source: String::new(),
    })
}

/// Reads an extended set and a geminal file and runs the transform.
pub fn transform_files(ext: &ExtendedIntegralSet, geminal: &GeminalTensor) -> Result<CtHamiltonian, TcError> {
    let amps = assemble_geminal_amplitudes(geminal);
    let mut out = ct_transform(ext, &amps)?;
    out.gamma = geminal.gamma;
    out.source = geminal.source.clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tensor(n_ext: usize, n_occ: usize) -> GeminalTensor {
        GeminalTensor::zeros(n_ext, n_ext, n_occ, 1.0)
    }

    #[test]
    fn spin_coefficients() {
        let mut r = tensor(4, 2);
        r.r[[2, 3, 0, 1]] = 1.0;
        r.r[[2, 3, 1, 0]] = 1.0;
        r.r[[3, 2, 0, 1]] = 1.0;
        r.r[[3, 2, 1, 0]] = -1.0;
        let g = assemble_geminal_amplitudes(&r).g;
        // symmetric in (i, j): R/2; antisymmetric: R/4
        assert_eq!(g[[2, 3, 0, 1]], 0.5);
        assert_eq!(g[[3, 2, 0, 1]], 0.25);
        assert_eq!(g[[3, 2, 1, 0]], -0.25);
        assert!(assemble_geminal_amplitudes(&tensor(3, 1)).g.max_abs() == 0.0);
    }

    #[test]
    fn generator_is_anti_hermitian() {
        let mut r = tensor(3, 1);
        r.r[[1, 2, 0, 0]] = 0.3;
        r.r[[2, 2, 0, 0]] = -0.1;
        let a = build_a(&assemble_geminal_amplitudes(&r));
        assert!(!a.is_empty());
        assert!(a.is_anti_hermitian(1e-15));
        assert!(build_a(&assemble_geminal_amplitudes(&tensor(3, 1))).is_empty());
    }

    #[test]
    fn fock_without_two_body_is_h() {
        let mut base = IntegralSet::zeros(2, 2, Symmetry::EightFold);
        base.h[[0, 1]] = 0.2;
        base.h[[1, 0]] = 0.2;
        let ext = ExtendedIntegralSet::new(base.clone(), 2, 1).unwrap();
        assert_eq!(build_fock(&ext).unwrap(), base.h);
    }
}
