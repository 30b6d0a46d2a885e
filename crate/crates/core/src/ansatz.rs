//! Trotterized UCCSD: excitation enumeration, Pauli-exponential blocks,
//! gate compilation and resource counting.

use crate::bits::iter_bits;
use crate::fermion::FermionOperator;
use crate::pauli::{PauliError, PauliString, PauliSum, QubitMapping};
use num_complex::Complex64;
use serde::Serialize;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnsatzError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("excitation {0}: Pauli terms of the generator do not commute")]
    NonCommuting(String),
    #[error("generator of {0} is not anti-Hermitian")]
    NotAntiHermitian(String),
    #[error("{0}")]
    Mismatch(String),
}

/// Spin-orbital excitation; indices use the spin-up block first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Excitation {
    Double { i: usize, j: usize, a: usize, b: usize },
    Single { i: usize, a: usize },
}

impl Excitation {
    /// Cluster operator `T` (before subtracting the adjoint).
    pub fn cluster(&self, n_modes: usize) -> FermionOperator {
        let mut t = FermionOperator::zero(n_modes);
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Excitation::Single { i, a } => t.add_product(&[a], &[i], one),
            Excitation::Double { i, j, a, b } => t.add_product(&[a, b], &[j, i], one),
        }
        t
    }

    /// Anti-Hermitian generator `T - T†`.
    pub fn generator(&self, n_modes: usize) -> FermionOperator {
        let t = self.cluster(n_modes);
        (t.clone() - t.adjoint()).compressed()
    }

    pub fn label(&self) -> String {
        match *self {
            Excitation::Single { i, a } => format!("{i}->{a}"),
            Excitation::Double { i, j, a, b } => format!("{i},{j}->{a},{b}"),
        }
    }
}

/// UCCSD excitations relative to a reference with the lowest orbitals filled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcitationList {
    pub n_spatial: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub doubles: Vec<Excitation>,
    pub singles: Vec<Excitation>,
}

impl ExcitationList {
    pub fn len(&self) -> usize {
        self.doubles.len() + self.singles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Doubles, then singles; this is also the parameter order.
    pub fn ordered(&self) -> Vec<Excitation> {
        self.doubles.iter().chain(&self.singles).copied().collect()
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_spatial
    }
}

/// All spin-conserving singles and doubles.
pub fn enumerate_uccsd(n_spatial: usize, n_alpha: usize, n_beta: usize) -> ExcitationList {
    let m = n_spatial;
    let occ_a: Vec<usize> = (0..n_alpha.min(m)).collect();
    let vir_a: Vec<usize> = (n_alpha.min(m)..m).collect();
    let occ_b: Vec<usize> = (0..n_beta.min(m)).map(|p| p + m).collect();
    let vir_b: Vec<usize> = (n_beta.min(m)..m).map(|p| p + m).collect();

    let mut singles = Vec::new();
    for (occ, vir) in [(&occ_a, &vir_a), (&occ_b, &vir_b)] {
        for &i in occ {
            for &a in vir {
                singles.push(Excitation::Single { i, a });
            }
        }
    }
    let mut doubles = Vec::new();
    for (occ, vir) in [(&occ_a, &vir_a), (&occ_b, &vir_b)] {
        for (x, &i) in occ.iter().enumerate() {
            for &j in &occ[x + 1..] {
                for (y, &a) in vir.iter().enumerate() {
                    for &b in &vir[y + 1..] {
                        doubles.push(Excitation::Double { i, j, a, b });
                    }
                }
            }
        }
    }
    for &i in &occ_a {
        for &j in &occ_b {
            for &a in &vir_a {
                for &b in &vir_b {
                    doubles.push(Excitation::Double { i, j, a, b });
                }
            }
        }
    }
    singles.sort();
    doubles.sort();
    ExcitationList {
        n_spatial,
        n_alpha,
        n_beta,
        doubles,
        singles,
    }
}

/// Closed-form parameter count.
pub fn uccsd_parameter_count(n_spatial: usize, n_alpha: usize, n_beta: usize) -> usize {
    let c2 = |n: usize| n * n.saturating_sub(1) / 2;
    let (oa, ob) = (n_alpha, n_beta);
    let (va, vb) = (n_spatial - n_alpha, n_spatial - n_beta);
    oa * va + ob * vb + c2(oa) * c2(va) + c2(ob) * c2(vb) + oa * ob * va * vb
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GateKind {
    H,
    /// `Rx(pi/2)`, maps `Y` to `Z` under conjugation.
    Rx90,
    /// `Rx(-pi/2)`.
    Rx90Dg,
    Cnot,
    /// `Rz(angle) = exp(-i angle Z / 2)`.
    Rz,
    /// Reference-state preparation.
    X,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::Rx90 => "RX90",
            GateKind::Rx90Dg => "RX90DG",
            GateKind::Cnot => "CNOT",
            GateKind::Rz => "RZ",
            GateKind::X => "X",
        }
    }
}

/// Gate; for `Rz` the angle is `scale * theta[param]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: [usize; 2],
    pub param: Option<usize>,
    pub scale: f64,
}

impl Gate {
    fn one(kind: GateKind, q: usize) -> Self {
        Self {
            kind,
            qubits: [q, q],
            param: None,
            scale: 0.0,
        }
    }

    pub fn arity(&self) -> usize {
        if self.kind == GateKind::Cnot {
            2
        } else {
            1
        }
    }

    pub fn targets(&self) -> &[usize] {
        &self.qubits[..self.arity()]
    }
}

/// One excitation: `exp(theta * G)` with `G = sum_k i c_k P_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub excitation: Excitation,
    pub param: usize,
    /// `(P_k, c_k)` with real `c_k`.
    pub terms: Vec<(PauliString, f64)>,
}

impl Block {
    pub fn generator(&self, n_qubits: usize) -> PauliSum {
        PauliSum::from_terms(n_qubits, self.terms.iter().map(|(p, c)| (*p, Complex64::new(0.0, *c))))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzCircuit {
    pub n_qubits: usize,
    pub n_params: usize,
    pub n_slices: usize,
    pub blocks: Vec<Block>,
    pub gates: Vec<Gate>,
    /// Encoded reference determinant the gates act on.
    pub reference: u128,
    /// Excitations dropped because they break a tapered symmetry.
    pub dropped: Vec<Excitation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub qubits: usize,
    pub parameters: usize,
    pub operations: usize,
    pub cnots: usize,
    pub depth: usize,
}

/// Gates for `exp(i phi P)` with `phi = scale * theta[param]`.
pub fn compile_pauli_exponential(p: &PauliString, param: usize, scale: f64, out: &mut Vec<Gate>) {
    let qubits: Vec<usize> = iter_bits(p.support()).collect();
    if qubits.is_empty() {
        // global phase
        return;
    }
    let change = |out: &mut Vec<Gate>, inverse: bool| {
        for &q in &qubits {
            match p.at(q) {
                'X' => out.push(Gate::one(GateKind::H, q)),
                'Y' => out.push(Gate::one(if inverse { GateKind::Rx90Dg } else { GateKind::Rx90 }, q)),
                _ => {}
            }
        }
    };
    change(out, false);
    for w in qubits.windows(2) {
        out.push(Gate {
            kind: GateKind::Cnot,
            qubits: [w[0], w[1]],
            param: None,
            scale: 0.0,
        });
    }
    let last = *qubits.last().unwrap();
    // exp(i phi Z) = Rz(-2 phi)
    out.push(Gate {
        kind: GateKind::Rz,
        qubits: [last, last],
        param: Some(param),
        scale: -2.0 * scale,
    });
    for w in qubits.windows(2).rev() {
        out.push(Gate {
            kind: GateKind::Cnot,
            qubits: [w[0], w[1]],
            param: None,
            scale: 0.0,
        });
    }
    change(out, true);
}

/// Maps each excitation generator through `mapping` and compiles the circuit.
pub fn build_ansatz(
    exc: &ExcitationList,
    mapping: &QubitMapping,
    n_slices: usize,
) -> Result<AnsatzCircuit, AnsatzError> {
    if mapping.n_orb != exc.n_spatial || mapping.n_up != exc.n_alpha || mapping.n_down != exc.n_beta {
        return Err(AnsatzError::Mismatch(format!(
            "excitations for ({}, {}a, {}b) but mapping for ({}, {}a, {}b)",
            exc.n_spatial, exc.n_alpha, exc.n_beta, mapping.n_orb, mapping.n_up, mapping.n_down
        )));
    }
    let n_slices = n_slices.max(1);
    let n_qubits = mapping.n_qubits();
    let mut blocks = Vec::new();
    let mut dropped = Vec::new();
    for e in exc.ordered() {
        let g = e.generator(exc.n_modes());
        if !mapping.preserves_symmetry(&g)? {
            dropped.push(e);
            continue;
        }
        let ps = mapping.map_operator(&g)?;
        let mut terms = Vec::with_capacity(ps.len());
        for (p, c) in ps.terms() {
            if c.re.abs() > 1e-12 {
                return Err(AnsatzError::NotAntiHermitian(e.label()));
            }
            terms.push((*p, c.im));
        }
        for (k, (p, _)) in terms.iter().enumerate() {
            if terms[..k].iter().any(|(q, _)| !q.commutes(p)) {
                return Err(AnsatzError::NonCommuting(e.label()));
            }
        }
        blocks.push(Block {
            excitation: e,
            param: blocks.len(),
            terms,
        });
    }
    let mut gates = Vec::new();
    for _ in 0..n_slices {
        for b in &blocks {
            for (p, c) in &b.terms {
                compile_pauli_exponential(p, b.param, c / n_slices as f64, &mut gates);
            }
        }
    }
    let reference = mapping.map_basis_state(mapping.reference_occupation())?;
    Ok(AnsatzCircuit {
        n_qubits,
        n_params: blocks.len(),
        n_slices,
        blocks,
        gates,
        reference,
        dropped,
    })
}

impl AnsatzCircuit {
    pub fn empty(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            n_params: 0,
            n_slices: 1,
            blocks: Vec::new(),
            gates: Vec::new(),
            reference: 0,
            dropped: Vec::new(),
        }
    }

    /// `X` gates taking `|0...0>` to the reference state.
    pub fn preparation(&self) -> Vec<Gate> {
        (0..self.n_qubits)
            .filter(|q| self.reference >> q & 1 == 1)
            .map(|q| Gate::one(GateKind::X, q))
            .collect()
    }

    /// Preparation followed by the ansatz gates.
    pub fn all_gates(&self) -> impl Iterator<Item = Gate> + '_ {
        self.preparation().into_iter().chain(self.gates.iter().copied())
    }

    pub fn resources(&self) -> ResourceReport {
        resource_report(self)
    }

    /// Line-based dump: `GATE q0 [q1] [p<index> <scale>]`.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "# qubits {} parameters {} slices {}\n",
            self.n_qubits, self.n_params, self.n_slices
        );
        for g in self.all_gates() {
            out.push_str(g.kind.name());
            for q in g.targets() {
                let _ = write!(out, " {q}");
            }
            if let Some(p) = g.param {
                let _ = write!(out, " p{p} {:.17e}", g.scale);
            }
            out.push('\n');
        }
        out
    }
}

/// Parameter, gate, CNOT and ASAP-depth counts, reference preparation included.
pub fn resource_report(circ: &AnsatzCircuit) -> ResourceReport {
    let mut level = vec![0usize; circ.n_qubits];
    let mut depth = 0;
    let mut cnots = 0;
    let mut operations = 0;
    for g in circ.all_gates() {
        operations += 1;
        let t = g.targets();
        let d = t.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for &q in t {
            level[q] = d;
        }
        depth = depth.max(d);
        if g.kind == GateKind::Cnot {
            cnots += 1;
        }
    }
    ResourceReport {
        qubits: circ.n_qubits,
        parameters: circ.n_params,
        operations,
        cnots,
        depth,
    }
}

impl ResourceReport {
    pub const CSV_HEADER: &'static str = "qubits,parameters,operations,cnots,depth";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.qubits, self.parameters, self.operations, self.cnots, self.depth
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::EncodingKind;

    #[test]
    fn h2_parameter_count() {
        let e = enumerate_uccsd(4, 1, 1);
        assert_eq!(e.singles.len(), 6);
        assert_eq!(e.doubles.len(), 9);
        assert_eq!(uccsd_parameter_count(4, 1, 1), 15);
        assert!(enumerate_uccsd(2, 2, 2).is_empty());
    }

    #[test]
    fn weight_four_exponential() {
        let p = PauliString::from_label("XXXY").unwrap();
        let mut gates = Vec::new();
        compile_pauli_exponential(&p, 0, 1.0, &mut gates);
        let circ = AnsatzCircuit {
            gates,
            n_params: 1,
            ..AnsatzCircuit::empty(4)
        };
        let r = resource_report(&circ);
        assert_eq!(r.operations, 15);
        assert_eq!(r.cnots, 6);
    }

    #[test]
    fn empty_circuit() {
        let map = QubitMapping::new(EncodingKind::JordanWigner, 2, 2, 2, false).unwrap();
        let c = build_ansatz(&enumerate_uccsd(2, 2, 2), &map, 1).unwrap();
        // only the preparation of the filled reference remains
        assert_eq!(
            resource_report(&c),
            ResourceReport {
                qubits: 4,
                parameters: 0,
                operations: 4,
                cnots: 0,
                depth: 1
            }
        );
    }

    #[test]
    fn h2_blocks_commute() {
        let map = QubitMapping::new(EncodingKind::JordanWigner, 4, 1, 1, false).unwrap();
        let c = build_ansatz(&enumerate_uccsd(4, 1, 1), &map, 1).unwrap();
        assert_eq!(c.n_params, 15);
        assert!(c.blocks[..9]
            .iter()
            .all(|b| matches!(b.excitation, Excitation::Double { .. })));
        // doubles give 8 strings, singles 2
        assert_eq!(c.blocks[0].terms.len(), 8);
        assert_eq!(c.blocks[14].terms.len(), 2);
        assert_eq!(c.dump().lines().count(), c.gates.len() + 3);
        assert!(c.dump().lines().nth(1).unwrap().starts_with("X "));
    }
}
