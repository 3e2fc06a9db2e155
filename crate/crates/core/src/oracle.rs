//! Brute-force reference states: determinant formulas, dense Fock-operator
//! products, and the loader-vs-oracle comparison.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::loader::{prepare_state_circuit, LadderStyle};
use crate::ortho::{combinations, minor_determinant, OrthonormalMatrix};
use crate::sim::{self, bitstring, StateVector};
use crate::{Error, Result};

pub const MAX_DENSE_MODES: usize = 10;
pub const MAX_ORACLE_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FockRole {
    Creation(usize),
    Annihilation(usize),
    P { mu: usize, l: usize },
}

/// Dense `2^n × 2^n` matrix of a fermionic operator, built entry by entry
/// from its action on occupation-number states.
#[derive(Debug, Clone)]
pub struct FockOperatorMatrix {
    pub n_modes: usize,
    pub role: FockRole,
    pub matrix: DMatrix<Complex64>,
}

fn check_dense(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DENSE_MODES {
        return Err(Error::TooLarge {
            what: "dense Fock operators",
            limit: MAX_DENSE_MODES,
            got: n,
        });
    }
    Ok(())
}

fn check_mode(mu: usize, n: usize) -> Result<()> {
    if mu == 0 || mu > n {
        return Err(Error::IndexSet(format!("mode {mu} outside 1..={n}")));
    }
    Ok(())
}

/// `(−1)^{number of occupied modes before μ}`
fn jw_sign(i: usize, mu: usize) -> f64 {
    if (i & ((1 << (mu - 1)) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl FockOperatorMatrix {
    pub fn creation(mu: usize, n_modes: usize) -> Result<Self> {
        check_dense(n_modes)?;
        check_mode(mu, n_modes)?;
        let dim = 1 << n_modes;
        let bit = 1 << (mu - 1);
        let mut m = DMatrix::zeros(dim, dim);
        for i in (0..dim).filter(|i| i & bit == 0) {
            m[(i | bit, i)] = Complex64::new(jw_sign(i, mu), 0.0);
        }
        Ok(Self {
            n_modes,
            role: FockRole::Creation(mu),
            matrix: m,
        })
    }

    pub fn annihilation(mu: usize, n_modes: usize) -> Result<Self> {
        let c = Self::creation(mu, n_modes)?;
        Ok(Self {
            n_modes,
            role: FockRole::Annihilation(mu),
            matrix: c.matrix.adjoint(),
        })
    }

    /// `p^{(L)}_μ`: the flip of block `μ` with the parity of the last mode
    /// of each earlier block.
    pub fn p(mu: usize, l: usize, n_modes: usize) -> Result<Self> {
        check_dense(n_modes)?;
        if l == 0 || n_modes % l != 0 {
            return Err(Error::Dimension(format!("L = {l} does not divide {n_modes}")));
        }
        check_mode(mu, n_modes / l)?;
        let flip: usize = (l * (mu - 1)..l * mu).map(|q| 1 << q).sum();
        let parity: usize = (1..mu).map(|j| 1 << (j * l - 1)).sum();
        let dim = 1 << n_modes;
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let s = if (i & parity).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(i ^ flip, i)] = Complex64::new(s, 0.0);
        }
        Ok(Self {
            n_modes,
            role: FockRole::P { mu, l },
            matrix: m,
        })
    }
}

fn vacuum(n: usize) -> nalgebra::DVector<Complex64> {
    let mut v = nalgebra::DVector::zeros(1 << n);
    v[0] = Complex64::new(1.0, 0.0);
    v
}

fn into_state(n: usize, v: nalgebra::DVector<Complex64>) -> Result<StateVector> {
    StateVector::normalized(n, v.as_slice().to_vec())
}

fn check_oracle_size(n: usize) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::TooLarge {
            what: "oracle construction",
            limit: MAX_ORACLE_QUBITS,
            got: n,
        });
    }
    Ok(())
}

/// `Σ_B det(A_B)|B⟩` over all `d`-subsets of the `N` rows.
pub fn slater_oracle_det(a: &OrthonormalMatrix) -> Result<StateVector> {
    correlated_oracle(a, 1, a.rows())
}

/// `Σ_{B'} det(G_{B'})|B'_L⟩`, where `B'_L` occupies the whole block
/// `L(j−1)+1 … Lj` for every `j ∈ B'`.
pub fn correlated_oracle(g: &OrthonormalMatrix, l: usize, n_qubits: usize) -> Result<StateVector> {
    if l == 0 || n_qubits != l * g.rows() {
        return Err(Error::Dimension(format!(
            "{n_qubits} qubits is not L = {l} times {} rows",
            g.rows()
        )));
    }
    check_oracle_size(n_qubits)?;
    let block = (1usize << l) - 1;
    let entries: Vec<(usize, f64)> = combinations(g.rows(), g.cols())
        .into_par_iter()
        .map(|rows| {
            let idx = rows.iter().map(|&j| block << (l * (j - 1))).sum();
            minor_determinant(g, &rows).map(|d| (idx, d))
        })
        .collect::<Result<_>>()?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    for (i, d) in entries {
        amps[i] = Complex64::new(d, 0.0);
    }
    StateVector::from_amplitudes(n_qubits, amps)
}

fn column_product(
    a: &OrthonormalMatrix,
    op: impl Fn(usize) -> Result<DMatrix<Complex64>>,
) -> Result<StateVector> {
    let n = a.rows();
    check_dense(n)?;
    let ops: Vec<DMatrix<Complex64>> = (1..=n).map(op).collect::<Result<_>>()?;
    let mut v = vacuum(n);
    // Column 1 is the leftmost factor, so column d acts first.
    for l in (0..a.cols()).rev() {
        let mut next = nalgebra::DVector::zeros(1 << n);
        for (mu, m) in ops.iter().enumerate() {
            next += m * &v * Complex64::new(a.get(mu, l), 0.0);
        }
        v = next;
    }
    into_state(n, v)
}

/// `Π_l (Σ_μ A_{μl} a†_μ)|0⟩`
pub fn slater_oracle_creation(a: &OrthonormalMatrix) -> Result<StateVector> {
    let n = a.rows();
    column_product(a, |mu| Ok(FockOperatorMatrix::creation(mu, n)?.matrix))
}

/// `Π_l (Σ_μ A_{μl} (a†_μ + a_μ))|0⟩`
pub fn slater_oracle_p(a: &OrthonormalMatrix) -> Result<StateVector> {
    let n = a.rows();
    column_product(a, |mu| {
        let c = FockOperatorMatrix::creation(mu, n)?.matrix;
        Ok(&c + c.adjoint())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub fidelity: f64,
    pub max_amp_error: f64,
    /// Phase of the simulated state relative to the oracle, in radians.
    pub global_phase: f64,
    /// Bitstrings of the simulated support, qubit 1 first.
    pub support: Vec<String>,
}

impl VerifyReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.fidelity > 1.0 - tol && self.max_amp_error < tol.sqrt().max(1e-10)
    }
}

/// Compare `actual` with `expected` after removing the relative phase at
/// the largest oracle amplitude.
pub fn compare_states(actual: &StateVector, expected: &StateVector) -> Result<VerifyReport> {
    let fidelity = sim::fidelity(actual, expected)?;
    let (k, _) = expected
        .amplitudes()
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, a)| if a.norm() > best.1 { (i, a.norm()) } else { best });
    let ratio = actual.amplitude(k) / expected.amplitude(k);
    let global_phase = if ratio.norm() > 0.0 { ratio.arg() } else { 0.0 };
    let undo = Complex64::from_polar(1.0, -global_phase);
    let max_amp_error = actual
        .amplitudes()
        .iter()
        .zip(expected.amplitudes())
        .map(|(a, b)| (a * undo - b).norm())
        .fold(0.0, f64::max);
    let support = actual
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(i, _)| bitstring(i, actual.n_qubits()))
        .collect();
    Ok(VerifyReport {
        fidelity,
        max_amp_error,
        global_phase,
        support,
    })
}

/// Simulate `circuit` from `|0…0⟩` and compare with the oracle for `m`.
pub fn verify_circuit(circuit: &Circuit, m: &OrthonormalMatrix, l: usize) -> Result<VerifyReport> {
    let expected = correlated_oracle(m, l, circuit.n_qubits())?;
    let actual = sim::run(circuit, None)?;
    compare_states(&actual, &expected)
}

pub fn verify_preparation(m: &OrthonormalMatrix, l: usize, style: LadderStyle) -> Result<VerifyReport> {
    check_oracle_size(l * m.rows())?;
    verify_circuit(&prepare_state_circuit(m, l, style, false)?, m, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::random_orthonormal;
    use crate::pauli::p_operator;
    use crate::sim::index_of;

    fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn canonical_anticommutation() {
        let n = 4;
        for a in 1..=n {
            for b in 1..=n {
                let x = FockOperatorMatrix::annihilation(a, n).unwrap().matrix;
                let y = FockOperatorMatrix::creation(b, n).unwrap().matrix;
                let mut ac = &x * &y + &y * &x;
                if a == b {
                    ac -= DMatrix::identity(16, 16);
                }
                assert!(ac.iter().all(|z| z.norm() < 1e-12));
                let z = FockOperatorMatrix::creation(a, n).unwrap().matrix;
                assert!((&z * &y + &y * &z).iter().all(|z| z.norm() < 1e-12));
            }
        }
    }

    #[test]
    fn p_matches_pauli_module() {
        for &(l, n) in &[(1, 5), (2, 6), (3, 9)] {
            for mu in 1..=n / l {
                let dense = p_operator(mu, l, n).unwrap().to_dense().unwrap();
                let fock = FockOperatorMatrix::p(mu, l, n).unwrap().matrix;
                assert!((&dense - &fock).iter().all(|z| z.norm() < 1e-12));
                if l == 1 {
                    let c = FockOperatorMatrix::creation(mu, n).unwrap().matrix;
                    assert!((&c + c.adjoint() - &fock).iter().all(|z| z.norm() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn det_oracle_examples() {
        let psi = slater_oracle_det(&OrthonormalMatrix::identity_columns(4, 2).unwrap()).unwrap();
        assert_eq!(psi.amplitude(index_of("1100").unwrap()).re, 1.0);
        let al: f64 = 0.4;
        let a = OrthonormalMatrix::from_columns(&[vec![al.cos(), al.sin()]]).unwrap();
        let psi = slater_oracle_det(&a).unwrap();
        assert!((psi.amplitude(index_of("10").unwrap()).re - al.cos()).abs() < 1e-15);
        assert!((psi.amplitude(index_of("01").unwrap()).re - al.sin()).abs() < 1e-15);
    }

    #[test]
    fn det_and_creation_oracles_agree() {
        for seed in 0..20 {
            let a = random_orthonormal(4, 2, seed).unwrap();
            let d = slater_oracle_det(&a).unwrap();
            let c = slater_oracle_creation(&a).unwrap();
            assert!(max_diff(&d, &c) < 1e-10);
        }
    }

    #[test]
    fn creation_and_p_variants_agree() {
        for (n, d) in [(3, 1), (4, 2), (6, 3), (5, 4)] {
            let a = random_orthonormal(n, d, 9).unwrap();
            let c = slater_oracle_creation(&a).unwrap();
            let p = slater_oracle_p(&a).unwrap();
            assert!(max_diff(&c, &p) < 1e-10, "N={n} d={d}");
        }
    }

    #[test]
    fn correlated_examples() {
        let a = random_orthonormal(5, 2, 4).unwrap();
        assert_eq!(correlated_oracle(&a, 1, 5).unwrap(), slater_oracle_det(&a).unwrap());
        let g = OrthonormalMatrix::from_columns(&[vec![0.6, -0.8]]).unwrap();
        let psi = correlated_oracle(&g, 2, 4).unwrap();
        assert_eq!(psi.amplitude(index_of("1100").unwrap()).re, 0.6);
        assert_eq!(psi.amplitude(index_of("0011").unwrap()).re, -0.8);
        assert!(correlated_oracle(&g, 2, 5).is_err());

        let g = random_orthonormal(4, 2, 6).unwrap();
        let psi = correlated_oracle(&g, 2, 8).unwrap();
        let paired = |i: usize| (0..4).all(|j| matches!(i >> (2 * j) & 3, 0 | 3));
        for (i, a) in psi.amplitudes().iter().enumerate() {
            if a.norm() > 0.0 {
                assert!(paired(i));
            }
        }
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn verify_identity_columns() {
        let m = OrthonormalMatrix::identity_columns(6, 3).unwrap();
        let r = verify_preparation(&m, 1, LadderStyle::LogTree).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-12 && r.max_amp_error < 1e-10);
        assert_eq!(r.support, vec!["111000".to_string()]);
    }

    #[test]
    fn size_guards() {
        assert!(FockOperatorMatrix::creation(1, 11).is_err());
        assert!(FockOperatorMatrix::creation(5, 4).is_err());
        let big = random_orthonormal(21, 1, 0).unwrap();
        assert!(matches!(slater_oracle_det(&big), Err(Error::TooLarge { .. })));
    }
}
