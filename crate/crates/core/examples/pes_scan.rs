//! Scans the committed H2 grid with q-UCCSD and fits a Morse potential around
//! the minimum.
//!
//! Usage: `pes_scan [INDEX.csv [MU]]`

use tcvqe::analysis::morse::{morse_fit_window, DEFAULT_WINDOW};
use tcvqe::analysis::scan::{run_scan, scan_csv, ScanConfig};
use tcvqe::driver::Engine;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let index = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/h2_631g/index.csv").to_string());
    let mu: f64 = args.next().map_or(Ok(0.503915), |s| s.parse())?;

    let mut cfg = ScanConfig::new(&index);
    cfg.options.engine = Engine::Sector;
    cfg.jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let rows = run_scan(&cfg)?;
    print!("{}", scan_csv(&rows));

    let (r, e): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|row| Some((row.geometry_value()?, row.vqe?)))
        .unzip();
    let f = morse_fit_window(&r, &e, mu, DEFAULT_WINDOW)?;
    println!();
    println!("Morse fit over {} points", f.n_points);
    println!("  R_eq  = {:.5} +- {:.1e} A", f.req, f.sigma[2]);
    println!("  D_e   = {:.5} +- {:.1e} Ha", f.de, f.sigma[0]);
    println!("  a     = {:.5} +- {:.1e} 1/A", f.a, f.sigma[1]);
    println!("  E_0   = {:.8} Ha", f.e0);
    println!("  omega = {:.1} +- {:.1} 1/cm", f.omega, f.sigma_omega);
    Ok(())
}
