//! Energy functionals, finite-difference gradients and an L-BFGS minimizer.

use crate::ansatz::AnsatzCircuit;
use crate::pauli::PauliSum;
use crate::simulator::{apply_ansatz, AnsatzPath, SectorEngine, SimError, StateVector};
use serde::Serialize;
use std::collections::VecDeque;
use std::fmt::Write as _;

/// Optimizer and gradient settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VqeOptions {
    pub fd_step: f64,
    pub grad_tol: f64,
    pub energy_tol: f64,
    /// Consecutive iterations with `|dE| < energy_tol` before stopping.
    pub energy_window: usize,
    pub max_iter: usize,
    pub memory: usize,
    pub c1: f64,
    pub c2: f64,
    pub max_line_evals: usize,
}

impl Default for VqeOptions {
    fn default() -> Self {
        Self {
            fd_step: 1e-6,
            grad_tol: 1e-6,
            energy_tol: 1e-9,
            energy_window: 3,
            max_iter: 500,
            memory: 10,
            c1: 1e-4,
            c2: 0.9,
            max_line_evals: 25,
        }
    }
}

/// Anything with a parameter vector and a scalar energy.
pub trait Objective {
    fn n_params(&self) -> usize;
    fn energy(&self, theta: &[f64]) -> Result<f64, SimError>;
}

/// Hamiltonian expectation in the ansatz state on the full qubit register.
#[derive(Debug, Clone)]
pub struct VqeProblem {
    pub hamiltonian: PauliSum,
    pub circuit: AnsatzCircuit,
    pub reference: StateVector,
    pub path: AnsatzPath,
}

impl VqeProblem {
    pub fn new(hamiltonian: PauliSum, circuit: AnsatzCircuit, reference: StateVector) -> Result<Self, SimError> {
        if hamiltonian.n_qubits != circuit.n_qubits {
            return Err(SimError::QubitMismatch(hamiltonian.n_qubits, circuit.n_qubits));
        }
        if reference.n_qubits != circuit.n_qubits {
            return Err(SimError::QubitMismatch(reference.n_qubits, circuit.n_qubits));
        }
        Ok(Self {
            hamiltonian,
            circuit,
            reference,
            path: AnsatzPath::Rotations,
        })
    }

    pub fn state(&self, theta: &[f64]) -> Result<StateVector, SimError> {
        apply_ansatz(&self.circuit, theta, &self.reference, self.path)
    }
}

impl Objective for VqeProblem {
    fn n_params(&self) -> usize {
        self.circuit.n_params
    }

    fn energy(&self, theta: &[f64]) -> Result<f64, SimError> {
        self.state(theta)?.expectation(&self.hamiltonian)
    }
}

impl Objective for SectorEngine {
    fn n_params(&self) -> usize {
        SectorEngine::n_params(self)
    }

    fn energy(&self, theta: &[f64]) -> Result<f64, SimError> {
        SectorEngine::energy(self, theta)
    }
}

/// Closure-backed objective, mainly for calibration functions.
pub struct FnObjective<F: Fn(&[f64]) -> f64> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64> Objective for FnObjective<F> {
    fn n_params(&self) -> usize {
        self.n
    }

    fn energy(&self, theta: &[f64]) -> Result<f64, SimError> {
        Ok((self.f)(theta))
    }
}

/// Central finite differences.
pub fn gradient(obj: &dyn Objective, theta: &[f64], h: f64) -> Result<Vec<f64>, SimError> {
    let mut x = theta.to_vec();
    let mut g = Vec::with_capacity(theta.len());
    for k in 0..theta.len() {
        x[k] = theta[k] + h;
        let fp = obj.energy(&x)?;
        x[k] = theta[k] - h;
        let fm = obj.energy(&x)?;
        x[k] = theta[k];
        g.push((fp - fm) / (2.0 * h));
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub energy: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqeResult {
    pub energy: f64,
    pub theta: Vec<f64>,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
    pub message: String,
    pub history: Vec<TraceRow>,
}

impl VqeResult {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,energy,grad_norm\n");
        for r in &self.history {
            let _ = writeln!(out, "{},{:.15e},{:.6e}", r.iteration, r.energy, r.grad_norm);
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

struct Point {
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
}

struct LineSearch<'a> {
    obj: &'a dyn Objective,
    opts: &'a VqeOptions,
    x0: &'a [f64],
    d: &'a [f64],
    f0: f64,
    dphi0: f64,
    evals: usize,
}

impl LineSearch<'_> {
    fn eval(&mut self, alpha: f64) -> Result<(Point, f64), SimError> {
        self.evals += 1;
        let x: Vec<f64> = self.x0.iter().zip(self.d).map(|(a, b)| a + alpha * b).collect();
        let f = self.obj.energy(&x)?;
        let g = gradient(self.obj, &x, self.opts.fd_step)?;
        let dphi = dot(&g, self.d);
        Ok((Point { x, f, g }, dphi))
    }

    fn armijo(&self, alpha: f64, f: f64) -> bool {
        f <= self.f0 + self.opts.c1 * alpha * self.dphi0
    }

    fn curvature(&self, dphi: f64) -> bool {
        dphi.abs() <= -self.opts.c2 * self.dphi0
    }

    /// Strong Wolfe search; `None` when no acceptable step was found.
    fn run(&mut self, alpha_init: f64) -> Result<Option<Point>, SimError> {
        let (mut a_prev, mut f_prev, mut d_prev) = (0.0, self.f0, self.dphi0);
        let mut alpha = alpha_init;
        let mut best: Option<Point> = None;
        for i in 0..self.opts.max_line_evals {
            let (p, dphi) = self.eval(alpha)?;
            if !self.armijo(alpha, p.f) || (i > 0 && p.f >= f_prev) {
                return self.zoom((a_prev, f_prev, d_prev), (alpha, p.f, dphi), best);
            }
            if self.curvature(dphi) {
                return Ok(Some(p));
            }
            if dphi >= 0.0 {
                let f = p.f;
                return self.zoom((alpha, f, dphi), (a_prev, f_prev, d_prev), Some(p));
            }
            a_prev = alpha;
            f_prev = p.f;
            d_prev = dphi;
            best = Some(p);
            alpha *= 2.0;
        }
        Ok(best)
    }

    fn zoom(
        &mut self,
        mut lo: (f64, f64, f64),
        mut hi: (f64, f64, f64),
        mut best: Option<Point>,
    ) -> Result<Option<Point>, SimError> {
        while self.evals < self.opts.max_line_evals {
            let alpha = interpolate(lo, hi);
            let (p, dphi) = self.eval(alpha)?;
            if !self.armijo(alpha, p.f) || p.f >= lo.1 {
                hi = (alpha, p.f, dphi);
            } else {
                if self.curvature(dphi) {
                    return Ok(Some(p));
                }
                if dphi * (hi.0 - lo.0) >= 0.0 {
                    hi = lo;
                }
                lo = (alpha, p.f, dphi);
                best = Some(p);
            }
            if (hi.0 - lo.0).abs() < 1e-14 * lo.0.abs().max(1.0) {
                break;
            }
        }
        // an Armijo step that lowered the energy is still usable
        Ok(best.filter(|p| p.f < self.f0))
    }
}

/// Cubic interpolation of the bracket, safeguarded to its interior.
fn interpolate(lo: (f64, f64, f64), hi: (f64, f64, f64)) -> f64 {
    let (a0, f0, d0) = lo;
    let (a1, f1, d1) = hi;
    let d1_ = d0 + d1 - 3.0 * (f0 - f1) / (a0 - a1);
    let disc = d1_ * d1_ - d0 * d1;
    let (left, right) = (a0.min(a1), a0.max(a1));
    let width = right - left;
    let mut a = f64::NAN;
    if disc >= 0.0 {
        let d2 = disc.sqrt() * (a1 - a0).signum();
        let denom = d1 - d0 + 2.0 * d2;
        if denom != 0.0 {
            a = a1 - (a1 - a0) * (d1 + d2 - d1_) / denom;
        }
    }
    if !a.is_finite() || a < left + 0.1 * width || a > right - 0.1 * width {
        a = 0.5 * (a0 + a1);
    }
    a
}

/// Unbounded L-BFGS from `theta0` with a strong Wolfe line search.
pub fn minimize(obj: &dyn Objective, theta0: &[f64], opts: &VqeOptions) -> Result<VqeResult, SimError> {
    if theta0.len() != obj.n_params() {
        return Err(SimError::ParamLength {
            expected: obj.n_params(),
            got: theta0.len(),
        });
    }
    let mut x = theta0.to_vec();
    let mut f = obj.energy(&x)?;
    let mut g = gradient(obj, &x, opts.fd_step)?;
    let mut history = vec![TraceRow {
        iteration: 0,
        energy: f,
        grad_norm: inf_norm(&g),
    }];
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut small_steps = 0;
    let mut message = String::from("maximum iterations reached");
    let mut converged = false;
    let mut iterations = 0;

    if x.is_empty() {
        return Ok(VqeResult {
            energy: f,
            theta: x,
            iterations: 0,
            grad_norm: 0.0,
            converged: true,
            message: "no parameters".into(),
            history,
        });
    }

    for k in 1..=opts.max_iter {
        if inf_norm(&g) < opts.grad_tol {
            message = "gradient tolerance".into();
            converged = true;
            break;
        }
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(memory.len());
        for (s, y, rho) in memory.iter().rev() {
            let a = rho * dot(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= a * yi;
            }
            alphas.push(a);
        }
        let gamma = memory.back().map_or(1.0, |(s, y, _)| dot(s, y) / dot(y, y));
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
        for ((s, y, rho), a) in memory.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            for (qi, si) in q.iter_mut().zip(s) {
                *qi += (a - b) * si;
            }
        }
        let mut d: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut dphi0 = dot(&g, &d);
        if dphi0 >= 0.0 {
            memory.clear();
            d = g.iter().map(|v| -v).collect();
            dphi0 = dot(&g, &d);
        }
        let alpha0 = if memory.is_empty() {
            (1.0 / inf_norm(&g)).min(1.0)
        } else {
            1.0
        };
        let mut ls = LineSearch {
            obj,
            opts,
            x0: &x,
            d: &d,
            f0: f,
            dphi0,
            evals: 0,
        };
        let Some(p) = ls.run(alpha0)? else {
            if !memory.is_empty() {
                memory.clear();
                continue;
            }
            message = "line search failed; returning best point".into();
            break;
        };
        iterations = k;
        let s: Vec<f64> = p.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = p.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 {
            memory.push_back((s, y, 1.0 / sy));
            if memory.len() > opts.memory {
                memory.pop_front();
            }
        }
        let df = (p.f - f).abs();
        x = p.x;
        f = p.f;
        g = p.g;
        history.push(TraceRow {
            iteration: k,
            energy: f,
            grad_norm: inf_norm(&g),
        });
        small_steps = if df < opts.energy_tol { small_steps + 1 } else { 0 };
        if small_steps >= opts.energy_window {
            message = "energy change tolerance".into();
            converged = true;
            break;
        }
    }
    if !converged && inf_norm(&g) < opts.grad_tol {
        converged = true;
        message = "gradient tolerance".into();
    }
    Ok(VqeResult {
        energy: f,
        theta: x,
        iterations,
        grad_norm: inf_norm(&g),
        converged,
        message,
        history,
    })
}
