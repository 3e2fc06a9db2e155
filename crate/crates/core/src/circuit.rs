//! Hardware-level gate IR: `x`, `h`, `rx`, `rz` and `cx` on zero-based qubits.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub mod qasm;

/// Qubit limit for dense unitary extraction.
pub const MAX_UNITARY_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    #[serde(rename = "x")]
    PauliX { qubit: usize },
    #[serde(rename = "h")]
    Hadamard { qubit: usize },
    /// `exp(−iθX/2)`
    #[serde(rename = "rx")]
    RotX { qubit: usize, angle: f64 },
    /// `exp(−iθZ/2) = diag(e^{−iθ/2}, e^{iθ/2})`
    #[serde(rename = "rz")]
    RotZ { qubit: usize, angle: f64 },
    #[serde(rename = "cx")]
    CNot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::PauliX { qubit }
            | Gate::Hadamard { qubit }
            | Gate::RotX { qubit, .. }
            | Gate::RotZ { qubit, .. } => (qubit, None),
            Gate::CNot { control, target } => (control, Some(target)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::CNot { .. })
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::RotX { qubit, angle } => Gate::RotX {
                qubit,
                angle: -angle,
            },
            Gate::RotZ { qubit, angle } => Gate::RotZ {
                qubit,
                angle: -angle,
            },
            g => g,
        }
    }

    /// 2×2 matrix of a single-qubit gate, row-major.
    pub fn matrix_1q(&self) -> Option<[[Complex64; 2]; 2]> {
        let c = |re, im| Complex64::new(re, im);
        match *self {
            Gate::PauliX { .. } => Some([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
            Gate::Hadamard { .. } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                Some([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]])
            }
            Gate::RotX { angle, .. } => {
                let (s, co) = (angle / 2.0).sin_cos();
                Some([[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]])
            }
            Gate::RotZ { angle, .. } => {
                let (s, co) = (angle / 2.0).sin_cos();
                Some([[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]])
            }
            Gate::CNot { .. } => None,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let (a, b) = self.qubits();
        if a >= n_qubits || b.is_some_and(|b| b >= n_qubits) {
            return Err(Error::Gate(format!(
                "{self:?} addresses a qubit outside 0..{n_qubits}"
            )));
        }
        if b == Some(a) {
            return Err(Error::Gate(format!("{self:?} has equal control and target")));
        }
        if let Gate::RotX { angle, .. } | Gate::RotZ { angle, .. } = self {
            if !angle.is_finite() {
                return Err(Error::Gate(format!("{self:?} has a non-finite angle")));
            }
        }
        Ok(())
    }
}

/// An ordered gate list on `n` qubits. Serializes as `{"n": .., "gates": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    #[serde(rename = "n")]
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<&mut Self> {
        g.validate(self.n_qubits)?;
        self.gates.push(g);
        Ok(self)
    }

    pub fn x(&mut self, qubit: usize) -> Result<&mut Self> {
        self.push(Gate::PauliX { qubit })
    }

    pub fn h(&mut self, qubit: usize) -> Result<&mut Self> {
        self.push(Gate::Hadamard { qubit })
    }

    pub fn rx(&mut self, qubit: usize, angle: f64) -> Result<&mut Self> {
        self.push(Gate::RotX { qubit, angle })
    }

    pub fn rz(&mut self, qubit: usize, angle: f64) -> Result<&mut Self> {
        self.push(Gate::RotZ { qubit, angle })
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::CNot { control, target })
    }

    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::Gate(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.n_qubits, self.n_qubits
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(self)
    }

    /// Reversed gate order with negated rotation angles.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Longest chain of CNOTs in the dependency DAG. Single-qubit gates carry
    /// ordering through their qubit but add no length.
    pub fn two_qubit_depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        for g in &self.gates {
            if let Gate::CNot { control, target } = *g {
                let l = level[control].max(level[target]) + 1;
                level[control] = l;
                level[target] = l;
            }
        }
        level.into_iter().max().unwrap_or(0)
    }

    /// Copy with every CNOT pair removed that is adjacent on both of its
    /// qubits (no gate in between touches either). Removal cascades.
    pub fn cancel_adjacent_cnots(&self) -> Circuit {
        let mut keep = vec![true; self.gates.len()];
        let mut last: Vec<Vec<usize>> = vec![Vec::new(); self.n_qubits];
        for (i, g) in self.gates.iter().enumerate() {
            match *g {
                Gate::CNot { control, target } => {
                    let prev_c = last[control].last().copied();
                    let prev_t = last[target].last().copied();
                    if let (Some(a), Some(b)) = (prev_c, prev_t) {
                        if a == b && self.gates[a] == *g {
                            keep[a] = false;
                            keep[i] = false;
                            last[control].pop();
                            last[target].pop();
                            continue;
                        }
                    }
                    last[control].push(i);
                    last[target].push(i);
                }
                _ => last[g.qubits().0].push(i),
            }
        }
        Circuit {
            n_qubits: self.n_qubits,
            gates: self
                .gates
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(g, _)| *g)
                .collect(),
        }
    }

    /// Dense unitary, the product of gate matrices in application order.
    pub fn unitary(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > MAX_UNITARY_QUBITS {
            return Err(Error::TooLarge {
                what: "unitary extraction",
                limit: MAX_UNITARY_QUBITS,
                got: self.n_qubits,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut u = DMatrix::<Complex64>::identity(dim, dim);
        for g in &self.gates {
            left_multiply(&mut u, g);
        }
        Ok(u)
    }

    pub fn to_qasm(&self) -> String {
        qasm::to_qasm(self)
    }
}

/// `u ← G·u`, touching only the rows the gate mixes.
fn left_multiply(u: &mut DMatrix<Complex64>, g: &Gate) {
    let dim = u.nrows();
    match *g {
        Gate::CNot { control, target } => {
            for row in 0..dim {
                if row >> control & 1 == 1 && row >> target & 1 == 0 {
                    u.swap_rows(row, row | 1 << target);
                }
            }
        }
        _ => {
            let q = g.qubits().0;
            let m = g.matrix_1q().unwrap();
            for row in 0..dim {
                if row >> q & 1 == 0 {
                    let partner = row | 1 << q;
                    for col in 0..dim {
                        let (a, b) = (u[(row, col)], u[(partner, col)]);
                        u[(row, col)] = m[0][0] * a + m[0][1] * b;
                        u[(partner, col)] = m[1][0] * a + m[1][1] * b;
                    }
                }
            }
        }
    }
}
