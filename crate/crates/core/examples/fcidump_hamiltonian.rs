//! Parse an FCIDUMP file, map it to qubits and compute HF and FCI energies.

use cliffload::chem::{fci_ground_energy, hf_energy, jw_hamiltonian, parse_fcidump};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/h2_sto3g_1.4bohr.fcidump").into());
    let dump = parse_fcidump(&std::fs::read_to_string(&path)?)?;
    println!("{path}: {} orbitals, {} electrons, core energy {:.10}", dump.n_orb, dump.n_elec, dump.core_energy);

    let h = jw_hamiltonian(&dump)?;
    println!("{} qubits, {} Pauli terms, constant {:.10}", h.n_qubits, h.pauli.len(), h.constant);
    for (c, s) in h.pauli.terms().take(6) {
        println!("  {c:+.8} {s}");
    }

    println!("E_HF  = {:.10}", hf_energy(&h, dump.n_elec)?);
    println!("E_FCI = {:.10}", fci_ground_energy(&h, dump.n_elec)?);
    Ok(())
}
