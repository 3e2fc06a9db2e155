//! Prepare a random Slater determinant and compare it with the minors of the
//! orbital matrix.

use cliffload::loader::{prepare_state_circuit, LadderStyle};
use cliffload::oracle::{compare_states, slater_oracle_det};
use cliffload::ortho::random_orthonormal;
use cliffload::sim;

fn main() -> cliffload::Result<()> {
    let (n, d) = (6, 3);
    let a = random_orthonormal(n, d, 11)?;
    let circuit = prepare_state_circuit(&a, 1, LadderStyle::LogTree, false)?;
    println!(
        "N={n} d={d}: {} gates, {} CNOTs, two-qubit depth {}",
        circuit.len(),
        circuit.cnot_count(),
        circuit.two_qubit_depth()
    );

    let psi = sim::run(&circuit, None)?;
    let report = compare_states(&psi, &slater_oracle_det(&a)?)?;
    println!("fidelity {:.15}  max amplitude error {:.2e}", report.fidelity, report.max_amp_error);
    println!("global phase {:+.6} rad", report.global_phase);

    println!("largest amplitudes:");
    let mut entries = psi.dump(1e-12);
    entries.sort_by(|a, b| (b.1 * b.1 + b.2 * b.2).total_cmp(&(a.1 * a.1 + a.2 * a.2)));
    for e in entries.iter().take(5) {
        println!("  |{}>  {:+.6}", e.0, e.1);
    }
    Ok(())
}
