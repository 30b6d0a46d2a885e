//! Command-line front end.
//!
//! Results go to stdout as `key,value` lines or CSV; failures print one
//! `error,<kind>,<message>` line to stderr and exit with 2 (usage),
//! 3 (input format) or 4 (numerical failure).

use crate::analysis::{self, cbs, morse, scan, AnalysisError};
use crate::driver::{self, DriverError, Engine, RunOptions};
use crate::integrals::{parse_dump, parse_extended, parse_geminal, write_tcdump, IntegralError, IntegralSet};
use crate::pauli::{EncodingKind, PauliError};
use crate::simulator::SimError;
use crate::transcorrelation::{transform_files, TcError};
use crate::vqe::VqeOptions;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Input(_) => 3,
            Self::Numerical(_) => 4,
        }
    }

    /// `error,<kind>,<message>` on one line.
    pub fn line(&self) -> String {
        let (kind, msg) = match self {
            Self::Usage(m) => ("usage", m),
            Self::Input(m) => ("input", m),
            Self::Numerical(m) => ("numerical", m),
        };
        let flat: String = msg.split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error,{kind},{flat}")
    }
}

impl From<IntegralError> for CliError {
    fn from(e: IntegralError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<TcError> for CliError {
    fn from(e: TcError) -> Self {
        match e {
            TcError::Integral(e) => e.into(),
            TcError::Extraction(_) => Self::Numerical(e.to_string()),
            other => Self::Input(other.to_string()),
        }
    }
}

impl From<PauliError> for CliError {
    fn from(e: PauliError) -> Self {
        match e {
            PauliError::Precondition(_) => Self::Usage(e.to_string()),
            other => Self::Input(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Eigen(_) | SimError::NonHermitian(_) => Self::Numerical(e.to_string()),
            SimError::TooManyQubits(..) | SimError::Dimension(..) => Self::Usage(e.to_string()),
            other => Self::Input(other.to_string()),
        }
    }
}

impl From<DriverError> for CliError {
    fn from(e: DriverError) -> Self {
        match e {
            DriverError::Pauli(e) => e.into(),
            DriverError::Sim(e) => e.into(),
            DriverError::Ansatz(e) => Self::Input(e.to_string()),
            DriverError::Input(m) => Self::Input(m),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Input(m) => Self::Input(m),
            other => Self::Numerical(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tcvqe",
    version,
    about = "Transcorrelated Hamiltonians, qubit mappings, q-UCCSD and VQE"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EncodingArg {
    Jw,
    Parity,
}

impl From<EncodingArg> for EncodingKind {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Jw => EncodingKind::JordanWigner,
            EncodingArg::Parity => EncodingKind::Parity,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EngineArg {
    Statevector,
    Sector,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExtrapolationArg {
    Rhf,
    Corr,
}

#[derive(Debug, Args)]
struct MappingArgs {
    /// FCIDUMP or TCDUMP file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "parity")]
    encoding: EncodingArg,
    /// Drop the two parity qubits fixed by particle-number conservation (parity only).
    #[arg(long)]
    two_qubit_reduction: bool,
    /// Remove qubits of diagonal Z2 symmetries.
    #[arg(long)]
    taper: bool,
}

impl MappingArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            encoding: self.encoding.into(),
            two_qubit_reduction: self.two_qubit_reduction,
            taper: self.taper,
            ..RunOptions::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transcorrelate an extended-space dump with a geminal file.
    Transform {
        #[arg(long)]
        ext: PathBuf,
        #[arg(long)]
        geminal: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Map a Hamiltonian to qubits and count Pauli terms.
    Map {
        #[command(flatten)]
        mapping: MappingArgs,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Qubit, parameter and gate counts of the q-UCCSD circuit.
    Resources {
        #[command(flatten)]
        mapping: MappingArgs,
        #[arg(long, default_value_t = 1)]
        slices: usize,
        /// Write the compiled gate list here.
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
    /// Minimize the q-UCCSD energy.
    Vqe {
        #[command(flatten)]
        mapping: MappingArgs,
        #[arg(long, value_enum, default_value = "statevector")]
        engine: EngineArg,
        #[arg(long, default_value_t = 1)]
        slices: usize,
        /// Initial parameters, whitespace or comma separated.
        #[arg(long)]
        theta0: Option<PathBuf>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        grad_tol: Option<f64>,
        /// Also diagonalize the Hamiltonian in the electron-number sector.
        #[arg(long)]
        exact: bool,
        /// Per-iteration energies as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a potential-energy scan described by a config file.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fit a Morse potential to a scan.
    FitMorse {
        #[arg(long = "in")]
        input: PathBuf,
        /// Reduced mass in u.
        #[arg(long)]
        mu: f64,
        /// Energy column to fit.
        #[arg(long, default_value = "vqe")]
        column: String,
        /// Number of points around the minimum; 0 uses all.
        #[arg(long, default_value_t = morse::DEFAULT_WINDOW)]
        window: usize,
    },
    /// Basis-set extrapolation over cc-pVxZ energies.
    Extrapolate {
        #[arg(value_enum)]
        kind: ExtrapolationArg,
        #[arg(long = "in")]
        input: PathBuf,
        /// Method rows to use from a reference table.
        #[arg(long)]
        method: Option<String>,
    },
    /// Large-basis RHF energy plus a correlation energy.
    Composite {
        #[arg(long, allow_hyphen_values = true)]
        rhf: f64,
        #[arg(long, allow_hyphen_values = true)]
        corr: f64,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_dump(path: &Path) -> Result<IntegralSet, CliError> {
    parse_dump(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_theta(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| CliError::Input(format!("theta0 '{s}': {e}")))
        })
        .collect()
}

fn check_finite(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be finite")))
    }
}

/// `(x, value)` pairs from a reference table (`basis`, `method`, energies) or an `x,energy` CSV.
fn extrapolation_series(text: &str, kind: ExtrapolationArg, method: Option<&str>) -> Result<Vec<(f64, f64)>, CliError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| CliError::Input(e.to_string()))?.clone();
    let col = |n: &str| headers.iter().position(|h| h.trim() == n);
    let mut out = Vec::new();
    if let (Some(bi), Some(mi)) = (col("basis"), col("method")) {
        let (want, vi) = match kind {
            ExtrapolationArg::Rhf => (method.unwrap_or("rhf"), col("total_energy")),
            ExtrapolationArg::Corr => (method.unwrap_or("ccsd"), col("correlation_energy")),
        };
        let vi = vi.ok_or_else(|| CliError::Input("reference table lacks an energy column".into()))?;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| CliError::Input(e.to_string()))?;
            if rec.get(mi).map(str::trim) != Some(want) {
                continue;
            }
            let basis = rec.get(bi).unwrap_or("").trim();
            let x = cbs::cardinal(basis).ok_or_else(|| CliError::Input(format!("'{basis}' is not a cc-pVxZ basis")))?;
            let v = rec.get(vi).unwrap_or("").trim();
            let v: f64 = v.parse().map_err(|e| CliError::Input(format!("energy '{v}': {e}")))?;
            out.push((f64::from(x), v));
        }
    } else {
        let xi = col("x").ok_or_else(|| CliError::Input("expected columns basis,method or x,energy".into()))?;
        let vi = col("energy").ok_or_else(|| CliError::Input("missing 'energy' column".into()))?;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| CliError::Input(e.to_string()))?;
            let get = |i: usize| {
                let s = rec.get(i).unwrap_or("").trim();
                s.parse::<f64>().map_err(|e| CliError::Input(format!("'{s}': {e}")))
            };
            out.push((get(xi)?, get(vi)?));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

fn execute(cmd: Command) -> Result<String, CliError> {
    let mut out = String::new();
    match cmd {
        Command::Transform { ext, geminal, output } => {
            let e = parse_extended(&read(&ext)?).map_err(|e| CliError::Input(format!("{}: {e}", ext.display())))?;
            let g =
                parse_geminal(&read(&geminal)?).map_err(|e| CliError::Input(format!("{}: {e}", geminal.display())))?;
            let ct = transform_files(&e, &g)?;
            let dump = write_tcdump(&ct.ints);
            match output {
                Some(p) => {
                    write_file(&p, &dump)?;
                    let _ = writeln!(out, "orbitals,{}", ct.ints.n_orb);
                    let _ = writeln!(out, "electrons,{}", ct.ints.n_elec);
                    let _ = writeln!(out, "gamma,{}", ct.gamma);
                    let _ = writeln!(out, "reference_energy,{:.12}", ct.ints.reference_energy());
                }
                None => out = dump,
            }
        }
        Command::Map {
            mapping,
            threshold,
            output,
        } => {
            check_finite("threshold", threshold)?;
            let ints = load_dump(&mapping.input)?;
            let opts = RunOptions {
                threshold,
                ..mapping.options()
            };
            let (ps, s) = driver::map_hamiltonian(&ints, &opts)?;
            let _ = writeln!(out, "orbitals,{}", s.orbitals);
            let _ = writeln!(out, "qubits,{}", s.qubits);
            let _ = writeln!(out, "paulis,{}", s.paulis);
            let _ = writeln!(out, "generators,{}", s.generators.join(" "));
            let sector: Vec<String> = s.sector.iter().map(i8::to_string).collect();
            let _ = writeln!(out, "sector,{}", sector.join(" "));
            if let Some(p) = output {
                write_file(&p, &ps.simplified(threshold).to_text())?;
            }
        }
        Command::Resources {
            mapping,
            slices,
            circuit,
        } => {
            if slices == 0 {
                return Err(CliError::Usage("--slices must be at least 1".into()));
            }
            let ints = load_dump(&mapping.input)?;
            let opts = RunOptions {
                slices,
                ..mapping.options()
            };
            let (circ, _, _) = driver::circuit_for(&ints, &opts)?;
            let r = circ.resources();
            let _ = writeln!(out, "qubits,{}", r.qubits);
            let _ = writeln!(out, "parameters,{}", r.parameters);
            let _ = writeln!(out, "operations,{}", r.operations);
            let _ = writeln!(out, "cnots,{}", r.cnots);
            let _ = writeln!(out, "depth,{}", r.depth);
            if let Some(p) = circuit {
                write_file(&p, &circ.dump())?;
            }
        }
        Command::Vqe {
            mapping,
            engine,
            slices,
            theta0,
            max_iter,
            grad_tol,
            exact,
            trace,
            output,
        } => {
            if slices == 0 {
                return Err(CliError::Usage("--slices must be at least 1".into()));
            }
            let ints = load_dump(&mapping.input)?;
            let mut vqe = VqeOptions::default();
            if let Some(m) = max_iter {
                vqe.max_iter = m;
            }
            if let Some(g) = grad_tol {
                check_finite("grad-tol", g)?;
                vqe.grad_tol = g;
            }
            let engine = match engine {
                EngineArg::Statevector => Engine::Statevector,
                EngineArg::Sector => Engine::Sector,
            };
            let opts = RunOptions {
                engine,
                slices,
                vqe,
                ..mapping.options()
            };
            let theta = theta0
                .as_deref()
                .map(read)
                .transpose()?
                .map(|t| parse_theta(&t))
                .transpose()?;
            let o = driver::run_vqe(&ints, &opts, theta.as_deref(), exact)?;
            if !o.energy.is_finite() {
                return Err(CliError::Numerical("VQE energy is not finite".into()));
            }
            let _ = writeln!(out, "qubits,{}", o.qubits);
            let _ = writeln!(out, "parameters,{}", o.parameters);
            let _ = writeln!(out, "reference_energy,{:.12}", o.reference_energy);
            let _ = writeln!(out, "energy,{:.12}", o.energy);
            if let Some(e) = o.exact_energy {
                let _ = writeln!(out, "exact_energy,{e:.12}");
            }
            let _ = writeln!(out, "iterations,{}", o.result.iterations);
            let _ = writeln!(out, "converged,{}", o.result.converged);
            if let Some(p) = trace {
                write_file(&p, &o.result.trace_csv())?;
            }
            if let Some(p) = output {
                let json = serde_json::to_string_pretty(&o).map_err(|e| CliError::Numerical(e.to_string()))?;
                write_file(&p, &(json + "\n"))?;
            }
        }
        Command::Scan { config, jobs, output } => {
            let flat = analysis::FlatConfig::parse(&read(&config)?)?;
            let base = config.parent().unwrap_or(Path::new("."));
            let mut cfg = scan::ScanConfig::from_flat(&flat, base)?;
            if let Some(j) = jobs {
                cfg.jobs = j.max(1);
            }
            let rows = scan::run_scan(&cfg)?;
            let csv = scan::scan_csv(&rows);
            match output {
                Some(p) => {
                    write_file(&p, &csv)?;
                    let done = rows.iter().filter(|r| r.vqe.is_some()).count();
                    let _ = writeln!(out, "points,{}", rows.len());
                    let _ = writeln!(out, "completed,{done}");
                }
                None => out = csv,
            }
        }
        Command::FitMorse {
            input,
            mu,
            column,
            window,
        } => {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(CliError::Usage("--mu must be a positive mass in u".into()));
            }
            let curve = scan::read_curve(&read(&input)?, &column)?;
            let (r, e): (Vec<f64>, Vec<f64>) = curve.into_iter().unzip();
            let f = if window == 0 {
                morse::morse_fit(&r, &e, mu)?
            } else {
                morse::morse_fit_window(&r, &e, mu, window)?
            };
            if !f.converged {
                return Err(CliError::Numerical("Morse fit did not converge".into()));
            }
            let names = ["de", "a", "req", "e0"];
            let vals = [f.de, f.a, f.req, f.e0];
            for (k, n) in names.iter().enumerate() {
                let _ = writeln!(out, "{n},{:.10}", vals[k]);
                let _ = writeln!(out, "sigma_{n},{:.3e}", f.sigma[k]);
            }
            let _ = writeln!(out, "omega,{:.4}", f.omega);
            let _ = writeln!(out, "sigma_omega,{:.3e}", f.sigma_omega);
            let _ = writeln!(out, "points,{}", f.n_points);
        }
        Command::Extrapolate { kind, input, method } => {
            let series = extrapolation_series(&read(&input)?, kind, method.as_deref())?;
            let (x, v): (Vec<f64>, Vec<f64>) = series.into_iter().unzip();
            let r = match kind {
                ExtrapolationArg::Rhf => cbs::cbs_rhf(&x, &v)?,
                ExtrapolationArg::Corr => cbs::cbs_corr(&x, &v)?,
            };
            let names: &[&str] = match kind {
                ExtrapolationArg::Rhf => &["alpha", "beta", "gamma"],
                ExtrapolationArg::Corr => &["alpha", "beta"],
            };
            let _ = writeln!(out, "e_cbs,{:.12}", r.e_cbs);
            for (n, p) in names.iter().zip(&r.params) {
                let _ = writeln!(out, "{n},{p:.12}");
            }
            let _ = writeln!(out, "points,{}", x.len());
            if let Some(flag) = &r.flag {
                let _ = writeln!(out, "flag,{flag}");
            }
        }
        Command::Composite { rhf, corr } => {
            check_finite("rhf", rhf)?;
            check_finite("corr", corr)?;
            let _ = writeln!(out, "energy,{:.12}", cbs::composite_energy(rhf, corr));
        }
    }
    Ok(out)
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            let err = CliError::Usage(first.to_string());
            let _ = writeln!(stderr, "{}", err.line());
            return err.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.line());
            e.exit_code()
        }
    }
}
