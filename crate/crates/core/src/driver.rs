//! End-to-end runs on one integral set: mapping, resources and VQE.

use crate::ansatz::{build_ansatz, enumerate_uccsd, AnsatzCircuit, AnsatzError, ResourceReport};
use crate::fermion::FermionOperator;
use crate::integrals::IntegralSet;
use crate::pauli::{EncodingKind, PauliError, PauliSum, QubitMapping};
use crate::simulator::{exact_ground_fermion, prepare_reference, SectorEngine, SimError};
use crate::vqe::{minimize, Objective, VqeOptions, VqeProblem, VqeResult};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Ansatz(#[from] AnsatzError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Engine {
    /// Full qubit-register statevector.
    Statevector,
    /// Determinants of the `(n_up, n_down)` sector only.
    Sector,
}

impl std::str::FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "statevector" | "qubit" => Ok(Self::Statevector),
            "sector" => Ok(Self::Sector),
            other => Err(format!("unknown engine '{other}' (statevector | sector)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunOptions {
    pub encoding: EncodingKind,
    pub two_qubit_reduction: bool,
    pub taper: bool,
    pub engine: Engine,
    pub slices: usize,
    pub threshold: f64,
    pub vqe: VqeOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            encoding: EncodingKind::Parity,
            two_qubit_reduction: true,
            taper: false,
            engine: Engine::Statevector,
            slices: 1,
            threshold: 1e-8,
            vqe: VqeOptions::default(),
        }
    }
}

/// Qubit mapping for `ints`, with tapering set up from its Hamiltonian if requested.
pub fn mapping_for(ints: &IntegralSet, opts: &RunOptions) -> Result<(QubitMapping, FermionOperator), DriverError> {
    let op = FermionOperator::from_spatial(ints);
    let mut map = QubitMapping::new(
        opts.encoding,
        ints.n_orb,
        ints.n_alpha(),
        ints.n_beta(),
        opts.two_qubit_reduction,
    )?;
    if opts.taper {
        map.enable_tapering(&op)?;
    }
    Ok((map, op))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapSummary {
    pub orbitals: usize,
    pub qubits: usize,
    pub paulis: usize,
    pub generators: Vec<String>,
    pub sector: Vec<i8>,
}

/// Mapped Hamiltonian and its summary.
pub fn map_hamiltonian(ints: &IntegralSet, opts: &RunOptions) -> Result<(PauliSum, MapSummary), DriverError> {
    let (map, op) = mapping_for(ints, opts)?;
    let ps = map.map_hamiltonian(&op)?;
    let (gens, sector) = map.generators();
    let summary = MapSummary {
        orbitals: ints.n_orb,
        qubits: ps.n_qubits,
        paulis: ps.count(opts.threshold),
        generators: gens.iter().map(|g| g.label(map.untapered_qubits())).collect(),
        sector,
    };
    Ok((ps, summary))
}

/// Compiled q-UCCSD circuit for `ints`.
pub fn circuit_for(
    ints: &IntegralSet,
    opts: &RunOptions,
) -> Result<(AnsatzCircuit, QubitMapping, FermionOperator), DriverError> {
    let (map, op) = mapping_for(ints, opts)?;
    let exc = enumerate_uccsd(ints.n_orb, ints.n_alpha(), ints.n_beta());
    let circ = build_ansatz(&exc, &map, opts.slices)?;
    Ok((circ, map, op))
}

pub fn resources(ints: &IntegralSet, opts: &RunOptions) -> Result<ResourceReport, DriverError> {
    Ok(circuit_for(ints, opts)?.0.resources())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqeOutcome {
    pub energy: f64,
    /// `<Phi|H|Phi>` of the reference determinant.
    pub reference_energy: f64,
    pub exact_energy: Option<f64>,
    pub qubits: usize,
    pub parameters: usize,
    pub engine: Engine,
    pub result: VqeResult,
}

/// Minimizes the q-UCCSD energy; `exact` adds a sector-restricted diagonalization.
pub fn run_vqe(
    ints: &IntegralSet,
    opts: &RunOptions,
    theta0: Option<&[f64]>,
    exact: bool,
) -> Result<VqeOutcome, DriverError> {
    let (circ, map, op) = circuit_for(ints, opts)?;
    let zeros = vec![0.0; circ.n_params];
    let theta0 = theta0.unwrap_or(&zeros);
    if theta0.len() != circ.n_params {
        return Err(DriverError::Input(format!(
            "initial parameters have length {}, circuit has {}",
            theta0.len(),
            circ.n_params
        )));
    }
    let objective: Box<dyn Objective> = match opts.engine {
        Engine::Statevector => {
            let ps = map.map_hamiltonian(&op)?;
            Box::new(VqeProblem::new(ps, circ.clone(), prepare_reference(&map)?)?)
        }
        Engine::Sector => {
            let exc: Vec<_> = circ.blocks.iter().map(|b| b.excitation).collect();
            Box::new(SectorEngine::new(
                &op,
                ints.n_orb,
                ints.n_alpha(),
                ints.n_beta(),
                &exc,
                opts.slices,
            )?)
        }
    };
    let reference_energy = objective.energy(&vec![0.0; circ.n_params])?;
    let result = minimize(objective.as_ref(), theta0, &opts.vqe)?;
    let exact_energy = if exact {
        Some(exact_ground_fermion(&op, ints.n_orb, ints.n_alpha(), ints.n_beta())?.0)
    } else {
        None
    };
    Ok(VqeOutcome {
        energy: result.energy,
        reference_energy,
        exact_energy,
        qubits: circ.n_qubits,
        parameters: circ.n_params,
        engine: opts.engine,
        result,
    })
}
