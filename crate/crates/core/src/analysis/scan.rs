//! Potential-energy scans over fixture grids.

use super::AnalysisError;
use crate::driver::{run_vqe, Engine, RunOptions};
use crate::integrals::{parse_dump, ReferenceTable};
use crate::pauli::EncodingKind;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Flat `key = value` configuration with `#` comments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlatConfig {
    pub values: BTreeMap<String, String>,
}

impl FlatConfig {
    pub fn parse(text: &str) -> Result<Self, AnalysisError> {
        let mut values = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| AnalysisError::Input(format!("config line {}: expected 'key = value'", k + 1)))?;
            if values
                .insert(key.trim().to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(AnalysisError::Input(format!(
                    "config line {}: duplicate key '{}'",
                    k + 1,
                    key.trim()
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, AnalysisError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| AnalysisError::Input(format!("config key '{key}': {e}")))
            })
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub index: PathBuf,
    pub reference: Option<PathBuf>,
    pub options: RunOptions,
    pub exact: bool,
    pub jobs: usize,
    /// Restrict to these geometries (matched to 1e-6).
    pub points: Option<Vec<f64>>,
}

impl ScanConfig {
    pub fn new(index: impl Into<PathBuf>) -> Self {
        Self {
            index: index.into(),
            reference: None,
            options: RunOptions::default(),
            exact: true,
            jobs: 1,
            points: None,
        }
    }

    /// Relative paths resolve against `base` (the config file's directory).
    pub fn from_flat(cfg: &FlatConfig, base: &Path) -> Result<Self, AnalysisError> {
        let resolve = |p: &str| {
            let p = PathBuf::from(p);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        let index = cfg
            .get("index")
            .ok_or_else(|| AnalysisError::Input("config needs 'index'".into()))?;
        let mut out = ScanConfig::new(resolve(index));
        out.reference = cfg.get("reference").map(resolve);
        let o = &mut out.options;
        if let Some(v) = cfg.parsed::<EncodingKind>("encoding")? {
            o.encoding = v;
        }
        if let Some(v) = cfg.parsed::<bool>("two_qubit_reduction")? {
            o.two_qubit_reduction = v;
        }
        if let Some(v) = cfg.parsed::<bool>("taper")? {
            o.taper = v;
        }
        if let Some(v) = cfg.parsed::<Engine>("engine")? {
            o.engine = v;
        }
        if let Some(v) = cfg.parsed::<usize>("slices")? {
            o.slices = v;
        }
        if let Some(v) = cfg.parsed::<usize>("max_iter")? {
            o.vqe.max_iter = v;
        }
        if let Some(v) = cfg.parsed::<f64>("grad_tol")? {
            o.vqe.grad_tol = v;
        }
        if let Some(v) = cfg.parsed::<f64>("energy_tol")? {
            o.vqe.energy_tol = v;
        }
        if let Some(v) = cfg.parsed::<f64>("fd_step")? {
            o.vqe.fd_step = v;
        }
        if let Some(v) = cfg.parsed::<bool>("exact")? {
            out.exact = v;
        }
        if let Some(v) = cfg.parsed::<usize>("jobs")? {
            out.jobs = v.max(1);
        }
        if let Some(v) = cfg.get("points") {
            let pts = v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| AnalysisError::Input(format!("config key 'points': {e}")))?;
            out.points = Some(pts);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexRow {
    pub species: String,
    pub basis: String,
    pub geometry: String,
    pub file: String,
}

pub fn read_index(path: &Path) -> Result<Vec<IndexRow>, AnalysisError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| AnalysisError::Input(format!("{}: {e}", path.display())))?;
    rdr.deserialize()
        .map(|r| r.map_err(|e| AnalysisError::Input(format!("{}: {e}", path.display()))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub species: String,
    pub basis: String,
    pub geometry: String,
    pub rhf: Option<f64>,
    pub vqe: Option<f64>,
    pub exact: Option<f64>,
    /// `vqe - rhf`, with `rhf` from the regular reference table when given.
    pub correlation: Option<f64>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub note: String,
}

impl ScanRow {
    pub fn geometry_value(&self) -> Option<f64> {
        self.geometry.parse().ok()
    }

    pub fn column(&self, name: &str) -> Option<f64> {
        match name {
            "rhf" => self.rhf,
            "vqe" => self.vqe,
            "exact" => self.exact,
            "correlation" => self.correlation,
            _ => None,
        }
    }
}

fn run_point(row: &IndexRow, dir: &Path, cfg: &ScanConfig, table: Option<&ReferenceTable>) -> ScanRow {
    let mut out = ScanRow {
        species: row.species.clone(),
        basis: row.basis.clone(),
        geometry: row.geometry.clone(),
        rhf: None,
        vqe: None,
        exact: None,
        correlation: None,
        iterations: None,
        converged: None,
        note: String::new(),
    };
    let path = dir.join(&row.file);
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(_) => {
            out.note = format!("missing {}", row.file);
            return out;
        }
    };
    let ints = match parse_dump(&text) {
        Ok(i) => i,
        Err(e) => {
            out.note = format!("unreadable {}: {e}", row.file);
            return out;
        }
    };
    let geom: f64 = row.geometry.parse().unwrap_or(f64::NAN);
    let regular_rhf = table.and_then(|t| t.total(&row.species, &row.basis, geom, "rhf"));
    match run_vqe(&ints, &cfg.options, None, cfg.exact) {
        Ok(o) => {
            out.rhf = Some(regular_rhf.unwrap_or(o.reference_energy));
            out.vqe = Some(o.energy);
            out.exact = o.exact_energy;
            out.correlation = Some(o.energy - out.rhf.unwrap());
            out.iterations = Some(o.result.iterations);
            out.converged = Some(o.result.converged);
            if !o.result.converged {
                out.note = o.result.message.clone();
            }
        }
        Err(e) => out.note = format!("failed: {e}"),
    }
    out
}

/// Runs every index entry; missing or failing points become rows with gaps.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>, AnalysisError> {
    let mut rows = read_index(&cfg.index)?;
    if let Some(points) = &cfg.points {
        rows.retain(|r| {
            r.geometry
                .parse::<f64>()
                .is_ok_and(|g| points.iter().any(|p| (p - g).abs() < 1e-6))
        });
    }
    let dir = cfg.index.parent().unwrap_or(Path::new(".")).to_path_buf();
    let table = match &cfg.reference {
        Some(p) => Some(ReferenceTable::load(p).map_err(|e| AnalysisError::Input(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let jobs = cfg.jobs.max(1).min(rows.len().max(1));
    let mut results: Vec<Option<ScanRow>> = vec![None; rows.len()];
    std::thread::scope(|s| {
        let chunks: Vec<_> = (0..jobs)
            .map(|w| {
                let rows = &rows;
                let dir = &dir;
                let table = table.as_ref();
                s.spawn(move || {
                    (w..rows.len())
                        .step_by(jobs)
                        .map(|i| (i, run_point(&rows[i], dir, cfg, table)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in chunks {
            for (i, r) in h.join().expect("scan worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    Ok(results.into_iter().map(|r| r.expect("every point visited")).collect())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("NA".into(), |x| format!("{x:.12}"))
}

pub const SCAN_HEADER: &str = "species,basis,geometry,rhf,vqe,exact,correlation,iterations,converged,note";

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = format!("{SCAN_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.species,
            r.basis,
            r.geometry,
            fmt_opt(r.rhf),
            fmt_opt(r.vqe),
            fmt_opt(r.exact),
            fmt_opt(r.correlation),
            r.iterations.map_or("NA".into(), |v| v.to_string()),
            r.converged.map_or("NA".into(), |v| v.to_string()),
            r.note.replace(',', ";"),
        );
    }
    out
}

/// `(geometry, value)` pairs of one column of a scan or two-column CSV, skipping `NA`.
pub fn read_curve(text: &str, column: &str) -> Result<Vec<(f64, f64)>, AnalysisError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| AnalysisError::Input(e.to_string()))?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let gi = find("geometry")
        .or_else(|| find("r"))
        .ok_or_else(|| AnalysisError::Input("no 'geometry' column".into()))?;
    let vi = find(column)
        .or_else(|| find("energy"))
        .ok_or_else(|| AnalysisError::Input(format!("no '{column}' column")))?;
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| AnalysisError::Input(e.to_string()))?;
        let (g, v) = (rec.get(gi).unwrap_or("").trim(), rec.get(vi).unwrap_or("").trim());
        if v.eq_ignore_ascii_case("na") || v.is_empty() {
            continue;
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| AnalysisError::Input(format!("row {}: '{s}': {e}", k + 2)))
        };
        out.push((parse(g)?, parse(v)?));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}
