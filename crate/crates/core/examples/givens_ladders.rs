//! Binary-tree Givens schedules and the two CNOT ladder layouts.

use cliffload::loader::{clifford_loader, cnot_ladder, givens_gate, LadderStyle};
use cliffload::ortho::compute_angles;

fn main() -> cliffload::Result<()> {
    let x = [0.1, -0.4, 0.2, 0.5, -0.3, 0.6, 0.1, -0.2];
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let x: Vec<f64> = x.iter().map(|v| v / norm).collect();

    let sched = compute_angles(&x)?;
    for (s, layer) in sched.layers.iter().enumerate() {
        let pairs: Vec<String> = layer.iter().map(|r| format!("({},{}) {:+.4}", r.mu, r.nu, r.theta)).collect();
        println!("sublayer {}: {}", s + 1, pairs.join("  "));
    }
    let back = sched.replay(&x);
    println!("replayed to e1: {:?}", back.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>());

    let qubits: Vec<usize> = (0..8).collect();
    for style in [LadderStyle::Cascade, LadderStyle::LogTree] {
        let ladder = cnot_ladder(&qubits, style)?;
        let g = givens_gate(1, 8, 0.3, 1, 8, style)?;
        let loader = clifford_loader(&x, 1, style)?;
        println!(
            "{style:?}: ladder depth {}, Givens(1,8) depth {}, loader depth {}",
            ladder.two_qubit_depth(),
            g.two_qubit_depth(),
            loader.two_qubit_depth()
        );
    }
    Ok(())
}
