use std::f64::consts::PI;

use cliffload::chem::{fci_ground_energy, hf_energy, jw_hamiltonian, parse_fcidump, MolecularHamiltonian};
use cliffload::loader::LadderStyle;
use cliffload::sim::particle_number_moments;
use cliffload::vqe::{ansatz_state, fd_gradient, objective, run_vqe, stiefel_dim, StiefelParams, VqeOptions};
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Regression value for the L=2 H4 run from the HF start.
const H4_FRACTION: f64 = 0.612153174;

fn hamiltonian(name: &str) -> MolecularHamiltonian {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    jw_hamiltonian(&parse_fcidump(&std::fs::read_to_string(path).unwrap()).unwrap()).unwrap()
}

fn h2() -> MolecularHamiltonian {
    hamiltonian("h2_sto3g_1.4bohr.fcidump")
}

fn h4() -> MolecularHamiltonian {
    hamiltonian("h4_sto3g_1.4bohr.fcidump")
}

#[test]
fn single_angle_sweep_reaches_fci() {
    let h = h2();
    let e_fci = fci_ground_energy(&h, 2).unwrap();
    let grid: Vec<(f64, f64)> = (0..64)
        .map(|k| {
            let a = -PI / 2.0 + PI * k as f64 / 64.0;
            (a, objective(&StiefelParams::new(2, 1, vec![a]).unwrap(), &h, 2, LadderStyle::LogTree).unwrap())
        })
        .collect();
    // The energy is a quadratic form in (cos α, sin α): A + B cos 2α + C sin 2α.
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for &(a, e) in &grid {
        let row = Vector3::new(1.0, (2.0 * a).cos(), (2.0 * a).sin());
        ata += row * row.transpose();
        atb += row * e;
    }
    let c = ata.lu().solve(&atb).unwrap();
    for &(a, e) in &grid {
        let fit = c[0] + c[1] * (2.0 * a).cos() + c[2] * (2.0 * a).sin();
        assert!((fit - e).abs() < 1e-10);
        assert!(e >= e_fci - 1e-9);
    }
    let min = c[0] - c[1].hypot(c[2]);
    assert!((min - e_fci).abs() < 1e-6, "{min} vs {e_fci}");
    let best = grid.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    assert!(best - e_fci < 1e-3);
}

#[test]
fn gradient_matches_richardson() {
    let h = h2();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for (l, n, d) in [(1, 4, 2), (2, 2, 1)] {
        let f = |x: &[f64]| objective(&StiefelParams::new(n, d, x.to_vec()).unwrap(), &h, l, LadderStyle::LogTree);
        for _ in 0..10 {
            let x: Vec<f64> = (0..stiefel_dim(n, d)).map(|_| rng.gen_range(-PI..PI)).collect();
            let g = fd_gradient(&f, &x, 1e-5).unwrap();
            for k in 0..x.len() {
                let central = |step: f64| {
                    let mut a = x.clone();
                    let mut b = x.clone();
                    a[k] += step;
                    b[k] -= step;
                    (f(&a).unwrap() - f(&b).unwrap()) / (2.0 * step)
                };
                let rich = (4.0 * central(5e-4) - central(1e-3)) / 3.0;
                let scale = rich.abs().max(1e-3);
                assert!((g[k] - rich).abs() / scale < 1e-5, "L={l} k={k}: {} vs {rich}", g[k]);
            }
        }
    }
}

#[test]
fn random_parameters_respect_variational_bound() {
    let h = h4();
    let e_fci = fci_ground_energy(&h, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (l, n, d) in [(1, 8, 4), (2, 4, 2)] {
        for _ in 0..20 {
            let x = (0..stiefel_dim(n, d)).map(|_| rng.gen_range(-PI..PI)).collect();
            let e = objective(&StiefelParams::new(n, d, x).unwrap(), &h, l, LadderStyle::LogTree).unwrap();
            assert!(e >= e_fci - 1e-9);
        }
    }
}

#[test]
fn zero_start_is_hartree_fock() {
    for (h, d) in [(h2(), 2), (h4(), 4)] {
        let e_hf = hf_energy(&h, d).unwrap();
        for l in [1, 2] {
            let n = h.n_qubits / l;
            let e = objective(&StiefelParams::zeros(n, d / l).unwrap(), &h, l, LadderStyle::Cascade).unwrap();
            assert!((e - e_hf).abs() < 1e-9);
        }
    }
}

#[test]
fn h2_pair_ansatz_is_exact() {
    let h = h2();
    let r = run_vqe(&h, 2, &VqeOptions::default()).unwrap();
    assert!(r.fraction.unwrap() >= 0.99);
    assert!(r.iterations <= 200);
    assert!((r.energy - r.e_fci).abs() < 1e-8);
}

#[test]
fn h4_pair_ansatz_properties() {
    let h = h4();
    let r = run_vqe(&h, 4, &VqeOptions::default()).unwrap();
    assert!(r.e_fci - 1e-9 <= r.energy && r.energy <= r.e_hf + 1e-9);
    let f = r.fraction.unwrap();
    assert!(f > 0.0 && f <= 1.0 + 1e-6);
    assert!((f - H4_FRACTION).abs() < 1e-6, "fraction moved: {f}");
    for w in r.trace.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-12, "energy rose at iteration {}", w[1].iter);
    }

    let psi = ansatz_state(&r.params, 2, LadderStyle::LogTree).unwrap();
    let (mean, var) = particle_number_moments(&psi);
    assert!((mean - 4.0).abs() < 1e-8 && var < 1e-8);
    let off_support = psi
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| (0..4).any(|j| (i >> (2 * j)) & 1 != (i >> (2 * j + 1)) & 1))
        .map(|(_, a)| a.norm())
        .fold(0.0, f64::max);
    assert!(off_support < 1e-9);
}

#[test]
fn single_determinant_ansatz_stays_at_hf() {
    let h = h4();
    let r = run_vqe(&h, 4, &VqeOptions { l: 1, ..Default::default() }).unwrap();
    assert!((r.energy - r.e_hf).abs() < 1e-9);
    assert!(r.energy >= r.e_fci);
}

#[test]
fn perturbed_start_is_deterministic() {
    let h = h2();
    let opts = VqeOptions { perturb_seed: Some(5), ..Default::default() };
    let a = run_vqe(&h, 2, &opts).unwrap();
    let b = run_vqe(&h, 2, &opts).unwrap();
    assert_eq!(a, b);
    assert!(a.fraction.unwrap() >= 0.99);
}
