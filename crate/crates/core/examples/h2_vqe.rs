//! Pair-correlated VQE for H2 in a minimal basis.

use cliffload::chem::{jw_hamiltonian, parse_fcidump};
use cliffload::vqe::{run_vqe, VqeOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/h2_sto3g_1.4bohr.fcidump"))?;
    let dump = parse_fcidump(&text)?;
    let h = jw_hamiltonian(&dump)?;

    for l in [1, 2] {
        let res = run_vqe(&h, dump.n_elec, &VqeOptions { l, ..Default::default() })?;
        println!(
            "L={l}: E = {:.10}  (HF {:.10}, FCI {:.10})  fraction {:.6}  in {} iterations",
            res.energy,
            res.e_hf,
            res.e_fci,
            res.fraction.unwrap_or(f64::NAN),
            res.iterations
        );
    }
    Ok(())
}
