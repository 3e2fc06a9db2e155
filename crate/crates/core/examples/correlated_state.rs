//! L-wise correlated states: occupations move in blocks of L modes.

use cliffload::loader::{prepare_correlated_circuit, LadderStyle};
use cliffload::oracle::verify_circuit;
use cliffload::ortho::{random_orthonormal, OrthonormalMatrix};
use cliffload::sim;

fn main() -> cliffload::Result<()> {
    // Equal superposition of the two pairs in a 4-qubit register.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let g = OrthonormalMatrix::from_columns(&[vec![s, s]])?;
    let c = prepare_correlated_circuit(&g, 2, LadderStyle::LogTree)?;
    let psi = sim::run(&c, None)?;
    for e in psi.dump(1e-12) {
        println!("|{}>  {:+.6} {:+.6}i", e.0, e.1, e.2);
    }

    for (l, rows, cols) in [(2, 6, 2), (3, 4, 2)] {
        let g = random_orthonormal(rows, cols, 5)?;
        let c = prepare_correlated_circuit(&g, l, LadderStyle::LogTree)?;
        let report = verify_circuit(&c, &g, l)?;
        println!(
            "L={l}: {} qubits, {} basis states in support, fidelity {:.12}",
            c.n_qubits(),
            report.support.len(),
            report.fidelity
        );
    }
    Ok(())
}
