//! q-UCCSD VQE for H2/6-31G at 0.74 A on the statevector simulator, with one
//! and two Trotter slices, compared with exact diagonalization.

use tcvqe::driver::{run_vqe, RunOptions};
use tcvqe::integrals::parse_dump;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/h2_631g/h2_631g_0.7400.fcidump"
        )
        .to_string()
    });
    let ints = parse_dump(&std::fs::read_to_string(&path)?)?;
    for slices in [1, 2] {
        let opts = RunOptions {
            slices,
            ..RunOptions::default()
        };
        let o = run_vqe(&ints, &opts, None, true)?;
        let exact = o.exact_energy.unwrap_or(f64::NAN);
        println!(
            "slices {slices}: {} qubits, {} parameters, {} iterations ({})",
            o.qubits, o.parameters, o.result.iterations, o.result.message
        );
        println!(
            "  reference {:.10}  VQE {:.10}  exact {:.10}  error {:.1e}",
            o.reference_energy,
            o.energy,
            exact,
            o.energy - exact
        );
        if slices == 1 {
            print!("{}", o.result.trace_csv());
        }
    }
    Ok(())
}
