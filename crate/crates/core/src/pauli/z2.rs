//! Z2 symmetry detection and qubit tapering.

use super::{PauliError, PauliString, PauliSum, PAULI_DROP};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaperingResult {
    /// Generators as labels on the input qubit register.
    pub generators: Vec<String>,
    #[serde(skip)]
    pub strings: Vec<PauliString>,
    pub sector: Vec<i8>,
    /// Input qubits removed, ascending.
    pub removed_qubits: Vec<usize>,
    #[serde(skip)]
    pub reduced: PauliSum,
}

/// Symplectic vector `(x | z)` packed as two words.
type Sym = (u128, u128);

fn sym_bit(v: Sym, col: usize, n: usize) -> bool {
    if col < n {
        v.0 >> col & 1 == 1
    } else {
        v.1 >> (col - n) & 1 == 1
    }
}

fn sym_xor(a: Sym, b: Sym) -> Sym {
    (a.0 ^ b.0, a.1 ^ b.1)
}

/// Reduced row echelon form over GF(2); returns the rows and their pivot columns.
fn rref(mut rows: Vec<Sym>, n: usize) -> (Vec<Sym>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..2 * n {
        let Some(p) = (r..rows.len()).find(|&k| sym_bit(rows[k], col, n)) else {
            continue;
        };
        rows.swap(r, p);
        for k in 0..rows.len() {
            if k != r && sym_bit(rows[k], col, n) {
                rows[k] = sym_xor(rows[k], rows[r]);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Null space basis of the matrix with the given rows over `2n` columns.
fn kernel(rows: Vec<Sym>, n: usize) -> Vec<Sym> {
    let (rows, pivots) = rref(rows, n);
    let mut basis = Vec::new();
    for free in (0..2 * n).filter(|c| !pivots.contains(c)) {
        let mut v: Sym = if free < n { (1 << free, 0) } else { (0, 1 << (free - n)) };
        for (row, &pc) in rows.iter().zip(&pivots) {
            if sym_bit(*row, free, n) {
                v = sym_xor(v, if pc < n { (1 << pc, 0) } else { (0, 1 << (pc - n)) });
            }
        }
        basis.push(v);
    }
    basis
}

fn in_span(v: Sym, basis: &[Sym], n: usize) -> bool {
    let mut rows = basis.to_vec();
    let before = rref(rows.clone(), n).0.len();
    rows.push(v);
    rref(rows, n).0.len() == before
}

/// Independent, mutually commuting Pauli strings that commute with every term.
///
/// Diagonal (Z-type) generators come first, in reduced echelon form, then any
/// further commuting generators found in the commutant. Ordering is
/// lexicographic on `(x, z)` within each group.
pub fn find_z2_symmetries(ps: &PauliSum) -> Vec<PauliString> {
    let n = ps.n_qubits;
    if n == 0 {
        return Vec::new();
    }
    // P commutes with t = (tx | tz) iff  P.z . tx + P.x . tz = 0
    let checks: Vec<Sym> = ps.strings().map(|p| (p.z, p.x)).collect();
    // diagonal part: tz with P.x . tz = 0 for every term
    let xonly: Vec<Sym> = ps.strings().map(|p| (p.x, 0)).collect();
    let zk = kernel(xonly, n)
        .into_iter()
        .filter(|v| v.0 != 0 && v.1 == 0)
        .map(|v| (0u128, v.0))
        .collect::<Vec<Sym>>();
    let mut diag = rref(zk, n).0;
    diag.sort();
    let mut chosen: Vec<PauliString> = diag.iter().map(|v| PauliString::new(v.0, v.1)).collect();

    let mut rest = kernel(checks, n);
    let (reduced, _) = rref(std::mem::take(&mut rest), n);
    let mut extra: Vec<Sym> = reduced.into_iter().filter(|v| v.0 != 0).collect();
    extra.sort();
    let mut span: Vec<Sym> = diag.clone();
    for v in extra {
        let p = PauliString::new(v.0, v.1);
        if chosen.iter().all(|c| c.commutes(&p)) && !in_span(v, &span, n) {
            span.push(v);
            chosen.push(p);
        }
    }
    chosen
}

fn check_generators(ps: &PauliSum, gens: &[PauliString]) -> Result<(), PauliError> {
    for (i, g) in gens.iter().enumerate() {
        if g.is_identity() {
            return Err(PauliError::NonCommuting("identity generator".into()));
        }
        if let Some(t) = ps.strings().find(|t| !t.commutes(g)) {
            return Err(PauliError::NonCommuting(format!(
                "generator {} anticommutes with term {}",
                g.label(ps.n_qubits),
                t.label(ps.n_qubits)
            )));
        }
        for h in &gens[..i] {
            if !g.commutes(h) {
                return Err(PauliError::NonCommuting(format!(
                    "generators {} and {} anticommute",
                    g.label(ps.n_qubits),
                    h.label(ps.n_qubits)
                )));
            }
        }
    }
    Ok(())
}

/// Eigenvalue of a diagonal Pauli string on a basis state.
pub fn z_eigenvalue(p: &PauliString, basis: u128) -> Result<i8, PauliError> {
    if p.x != 0 {
        return Err(PauliError::Precondition("generator is not diagonal".into()));
    }
    Ok(if crate::bits::parity(p.z & basis) { -1 } else { 1 })
}

/// Clifford rotation plan: generators in echelon form with one pivot qubit each.
#[derive(Debug, Clone, PartialEq)]
pub struct Tapering {
    pub n_qubits: usize,
    pub generators: Vec<PauliString>,
    pub sector: Vec<i8>,
    /// `(qubit, sigma)` with sigma a single-qubit X or Z anticommuting with its generator only.
    pub pivots: Vec<(usize, PauliString)>,
}

impl Tapering {
    pub fn new(n_qubits: usize, generators: &[PauliString], sector: &[i8]) -> Result<Self, PauliError> {
        if generators.len() != sector.len() {
            return Err(PauliError::Precondition("one sector value per generator".into()));
        }
        if sector.iter().any(|s| *s != 1 && *s != -1) {
            return Err(PauliError::Precondition("sector values must be +1 or -1".into()));
        }
        // echelon form, tracking eigenvalues through the products
        let mut gens: Vec<(PauliString, f64)> = generators.iter().zip(sector).map(|(g, s)| (*g, *s as f64)).collect();
        let n = n_qubits;
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in (0..2 * n).rev() {
            let bit = |g: &PauliString| sym_bit((g.z, g.x), col, n);
            let Some(p) = (r..gens.len()).find(|&k| bit(&gens[k].0)) else {
                continue;
            };
            gens.swap(r, p);
            let (gr, sr) = gens[r];
            for k in 0..gens.len() {
                if k != r && bit(&gens[k].0) {
                    let (gk, sk) = gens[k];
                    let (ph, prod) = gk.mul(&gr);
                    // commuting Hermitian strings: phase is +-1
                    gens[k] = (prod, sk * sr * ph.re);
                }
            }
            // column in (z | x) order: z-pivot -> sigma = X, x-pivot -> sigma = Z
            let (q, sigma) = if col < n {
                (col, PauliString::single(col, 'X'))
            } else {
                (col - n, PauliString::single(col - n, 'Z'))
            };
            pivots.push((r, q, sigma));
            r += 1;
            if r == gens.len() {
                break;
            }
        }
        if r < gens.len() {
            return Err(PauliError::Precondition("generators are not independent".into()));
        }
        let mut qs: Vec<usize> = pivots.iter().map(|p| p.1).collect();
        qs.sort();
        qs.dedup();
        if qs.len() != pivots.len() {
            return Err(PauliError::Precondition("two generators share a pivot qubit".into()));
        }
        let generators = gens.iter().map(|g| g.0).collect();
        let sector = gens.iter().map(|g| if g.1 > 0.0 { 1 } else { -1 }).collect();
        let pivots = pivots.into_iter().map(|(_, q, s)| (q, s)).collect();
        Ok(Self {
            n_qubits,
            generators,
            sector,
            pivots,
        })
    }

    /// `U† P U` for `U = prod (sigma_i + tau_i)/sqrt 2`, applied to one string.
    pub fn rotate(&self, p: &PauliString, c: Complex64) -> (PauliString, Complex64) {
        let mut p = *p;
        let mut c = c;
        for ((_, sigma), tau) in self.pivots.iter().zip(&self.generators) {
            if !p.commutes(sigma) {
                let (ph1, pt) = p.mul(tau);
                let (ph2, pts) = pt.mul(sigma);
                p = pts;
                c *= ph1 * ph2;
            }
        }
        (p, c)
    }

    /// Rotates, substitutes the sector eigenvalues and deletes the pivot qubits.
    pub fn apply(&self, ps: &PauliSum) -> Result<PauliSum, PauliError> {
        let mut rotated = PauliSum::zero(ps.n_qubits);
        for (p, c) in ps.terms() {
            let (q, d) = self.rotate(p, *c);
            rotated.add(q, d);
        }
        let mut order: Vec<(usize, PauliString, i8)> = self
            .pivots
            .iter()
            .zip(&self.sector)
            .map(|((q, s), e)| (*q, *s, *e))
            .collect();
        order.sort_by_key(|o| std::cmp::Reverse(o.0));
        let mut out = rotated;
        for (q, sigma, e) in order {
            let mut next = PauliSum::zero(out.n_qubits - 1);
            for (p, c) in out.terms() {
                let here = PauliString::new(p.x & 1 << q, p.z & 1 << q);
                let f = if here.is_identity() {
                    1.0
                } else if here == sigma {
                    e as f64
                } else {
                    return Err(PauliError::NonCommuting(format!(
                        "rotated term {} is not diagonal in the pivot qubit {q}",
                        p.label(out.n_qubits)
                    )));
                };
                next.add(p.remove_qubit(q), c * f);
            }
            out = next;
        }
        Ok(out.simplified(PAULI_DROP))
    }

    pub fn removed_qubits(&self) -> Vec<usize> {
        let mut q: Vec<usize> = self.pivots.iter().map(|p| p.0).collect();
        q.sort();
        q
    }

    /// Basis state after tapering, valid when every pivot is an X (diagonal generators).
    pub fn taper_state(&self, basis: u128) -> Result<u128, PauliError> {
        if self.pivots.iter().any(|(_, s)| s.z != 0) {
            return Err(PauliError::Precondition(
                "state tapering needs diagonal generators".into(),
            ));
        }
        for (g, e) in self.generators.iter().zip(&self.sector) {
            if z_eigenvalue(g, basis)? != *e {
                return Err(PauliError::Precondition("state is outside the tapered sector".into()));
            }
        }
        let mut qs = self.removed_qubits();
        qs.reverse();
        Ok(qs.into_iter().fold(basis, |b, q| {
            let low = b & ((1u128 << q) - 1);
            low | (b >> (q + 1)) << q
        }))
    }
}

/// Tapers `ps` with the given generators and eigenvalues.
pub fn taper(ps: &PauliSum, generators: &[PauliString], sector: &[i8]) -> Result<TaperingResult, PauliError> {
    check_generators(ps, generators)?;
    let plan = Tapering::new(ps.n_qubits, generators, sector)?;
    let reduced = plan.apply(ps)?;
    Ok(TaperingResult {
        generators: generators.iter().map(|g| g.label(ps.n_qubits)).collect(),
        strings: generators.to_vec(),
        sector: sector.to_vec(),
        removed_qubits: plan.removed_qubits(),
        reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(n: usize, labels: &[(&str, f64)]) -> PauliSum {
        PauliSum::from_terms(
            n,
            labels
                .iter()
                .map(|(l, c)| (PauliString::from_label(l).unwrap(), Complex64::new(*c, 0.0))),
        )
    }

    #[test]
    fn zz_symmetries() {
        let g = find_z2_symmetries(&sum(2, &[("ZZ", 1.0)]));
        assert!(g.contains(&PauliString::from_label("IZ").unwrap()));
        assert!(g.contains(&PauliString::from_label("ZI").unwrap()));
        assert!(g.iter().all(|a| g.iter().all(|b| a.commutes(b))));
    }

    #[test]
    fn single_x_term() {
        let ps = sum(1, &[("X", 1.0)]);
        let g = find_z2_symmetries(&ps);
        assert_eq!(g, vec![PauliString::from_label("X").unwrap()]);
    }

    #[test]
    fn empty_generators_is_identity() {
        let ps = sum(2, &[("XY", 0.3), ("ZI", -1.0)]);
        let r = taper(&ps, &[], &[]).unwrap();
        assert_eq!(r.reduced, ps);
    }

    #[test]
    fn taper_zz() {
        let ps = sum(2, &[("ZZ", 1.0), ("XX", 0.5)]);
        let g = vec![PauliString::from_label("ZZ").unwrap()];
        let plus = taper(&ps, &g, &[1]).unwrap().reduced;
        let minus = taper(&ps, &g, &[-1]).unwrap().reduced;
        assert_eq!(plus.n_qubits, 1);
        let mut ev: Vec<f64> = [plus, minus]
            .iter()
            .flat_map(|s| crate::linalg::dense_spectrum(&s.matrix()))
            .collect();
        ev.sort_by(f64::total_cmp);
        let mut want = crate::linalg::dense_spectrum(&ps.matrix());
        want.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(taper(&ps, &[PauliString::from_label("ZI").unwrap()], &[1]).is_err());
    }
}
