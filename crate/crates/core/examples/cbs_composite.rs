//! Extrapolates the committed cc-pVxZ H2 energies to the basis-set limit and
//! builds a composite energy from the limit RHF energy and a small-basis
//! q-UCCSD correlation energy.

use tcvqe::analysis::cbs::{cardinal, cbs_corr, cbs_rhf, composite_energy};
use tcvqe::driver::{run_vqe, Engine, RunOptions};
use tcvqe::integrals::{parse_dump, ReferenceTable};

fn series(table: &ReferenceTable, method: &str, correlation: bool) -> (Vec<f64>, Vec<f64>) {
    let mut pts: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter(|r| r.method == method)
        .filter_map(|r| {
            let x = f64::from(cardinal(&r.basis)?);
            Some((
                x,
                if correlation {
                    r.correlation_energy?
                } else {
                    r.total_energy
                },
            ))
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.into_iter().unzip()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
    let table = ReferenceTable::load(format!("{root}/cbs/h2_cbs.csv"))?;

    let (x, e) = series(&table, "rhf", false);
    let rhf = cbs_rhf(&x, &e)?;
    println!("RHF   x = {x:?}");
    println!(
        "      alpha {:.8}  beta {:.5}  gamma {:.4}",
        rhf.params[0], rhf.params[1], rhf.params[2]
    );
    let (x, c) = series(&table, "ccsd", true);
    let corr = cbs_corr(&x, &c)?;
    println!("CCSD  x = {x:?}");
    println!("      alpha' {:.8}  beta' {:.5}", corr.params[0], corr.params[1]);
    println!("CCSD/CBS total: {:.8}", composite_energy(rhf.e_cbs, corr.e_cbs));

    // small-basis correlation: q-UCCSD/6-31G minus RHF/6-31G at the same geometry
    let ints = parse_dump(&std::fs::read_to_string(format!(
        "{root}/h2_631g/h2_631g_0.7400.fcidump"
    ))?)?;
    let opts = RunOptions {
        engine: Engine::Sector,
        ..RunOptions::default()
    };
    let o = run_vqe(&ints, &opts, None, false)?;
    let small = ReferenceTable::load(format!("{root}/h2_631g/reference.csv"))?;
    let e_rhf = small
        .total("H2", "6-31G", 0.74, "rhf")
        .ok_or("no RHF/6-31G reference at 0.74")?;
    let c_small = o.energy - e_rhf;
    println!("q-UCCSD/6-31G correlation: {c_small:.8}");
    println!(
        "composite (RHF/CBS + q-UCCSD/6-31G correlation): {:.8}",
        composite_energy(rhf.e_cbs, c_small)
    );
    Ok(())
}
