//! Shallow Clifford-loader circuits for fermionic state preparation.
//!
//! A Slater determinant over `N` modes with `d` occupied orbitals is prepared by
//! applying `d` Clifford loaders `C(x) = Σ x_μ p_μ` to the vacuum, where each
//! loader is a binary tree of Givens rotations sandwiching a Pauli-X. The same
//! construction with the block operators `p^{(L)}_μ` prepares L-wise correlated
//! states whose occupations come in contiguous blocks of `L` modes.
//!
//! Modules, bottom-up:
//!
//! - [`ortho`]: orthonormal matrices, binary-tree Givens schedules, minors
//! - [`pauli`]: signed Pauli strings and real Pauli sums
//! - [`circuit`]: gate IR, two-qubit depth, dense unitaries, OpenQASM 2.0
//! - [`loader`]: Givens gates, CNOT ladders, Clifford loaders, state preparation
//! - [`sim`]: statevector simulator and expectations
//! - [`oracle`]: brute-force reference states (determinants, dense Fock operators)
//! - [`chem`]: FCIDUMP parsing, Jordan-Wigner Hamiltonians, HF and FCI energies
//! - [`vqe`]: Stiefel parameterization and L-BFGS minimization of the ansatz energy
//! - [`cli`]: the `cliffload` command line
//!
//! Qubit `q` (zero-based) is fermionic mode `q + 1` and lives in bit `q` of a
//! statevector index, so the Fock string `|b₁b₂…b_N⟩` is index `Σ b_q 2^{q-1}`.

pub mod chem;
pub mod circuit;
pub mod cli;
mod error;
pub mod loader;
pub mod oracle;
pub mod ortho;
pub mod pauli;
pub mod sim;
pub mod vqe;

pub use error::{Error, Result};
