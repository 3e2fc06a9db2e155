//! Clifford-loader synthesis: Givens rotation gates, CNOT parity ladders,
//! unary loaders and full Slater / L-wise preparation circuits.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::str::FromStr;

use crate::circuit::Circuit;
use crate::ortho::{compute_angles, GivensSchedule, OrthonormalMatrix, ORTHO_TOL};
use crate::pauli::{multiply, p_operator, Letter};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderStyle {
    Cascade,
    #[default]
    LogTree,
}

impl FromStr for LadderStyle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cascade" => Ok(Self::Cascade),
            "logtree" => Ok(Self::LogTree),
            _ => Err(Error::Params(format!("unknown ladder style {s:?}"))),
        }
    }
}

/// CNOTs leaving the parity of `qubits` (0-based) on the last listed qubit.
pub fn cnot_ladder(qubits: &[usize], style: LadderStyle) -> Result<Circuit> {
    let &last = qubits
        .last()
        .ok_or_else(|| Error::Gate("empty ladder".into()))?;
    let n = qubits.iter().max().unwrap() + 1;
    let mut c = Circuit::new(n);
    let k = qubits.len();
    match style {
        LadderStyle::Cascade => {
            for w in qubits.windows(2) {
                c.cx(w[0], w[1])?;
            }
        }
        LadderStyle::LogTree => {
            // r counts from the end, so the tree root r = 0 is `last`.
            let at = |r: usize| qubits[k - 1 - r];
            let mut s = 1;
            while s < k {
                for r in (0..k).step_by(2 * s).filter(|r| r + s < k) {
                    c.cx(at(r + s), at(r))?;
                }
                s *= 2;
            }
            debug_assert_eq!(at(0), last);
        }
    }
    Ok(c)
}

/// `exp[θ p^{(L)}_μ p^{(L)}_ν]` as basis change, parity ladder, `RotZ` on
/// the last support qubit, and the mirror image.
pub fn givens_gate(
    mu: usize,
    nu: usize,
    theta: f64,
    l: usize,
    n_qubits: usize,
    style: LadderStyle,
) -> Result<Circuit> {
    if mu == 0 || mu >= nu {
        return Err(Error::IndexSet(format!("need 1 ≤ μ < ν, got ({mu}, {nu})")));
    }
    let generator = multiply(&p_operator(mu, l, n_qubits)?, &p_operator(nu, l, n_qubits)?)?;
    // p_μ p_ν = ∓i·P, so the gate is exp(∓iθP) = RotZ(±2θ) in the Z frame.
    let angle = match generator.phase() {
        3 => 2.0 * theta,
        1 => -2.0 * theta,
        p => unreachable!("anticommuting product with real phase {p}"),
    };
    let support = generator.support();
    let mut basis = Circuit::new(n_qubits);
    let mut unbasis = Circuit::new(n_qubits);
    for &q in &support {
        match generator.letter(q) {
            Letter::X => {
                basis.h(q)?;
                unbasis.h(q)?;
            }
            Letter::Y => {
                basis.rx(q, FRAC_PI_2)?;
                unbasis.rx(q, -FRAC_PI_2)?;
            }
            _ => {}
        }
    }
    let ladder = cnot_ladder(&support, style)?;
    let mut c = basis;
    c.append(&ladder)?;
    c.rz(*support.last().unwrap(), angle)?;
    c.append(&ladder.inverse())?;
    c.append(&unbasis)?;
    Ok(c)
}

fn schedule_circuit(
    sched: &GivensSchedule,
    l: usize,
    n_qubits: usize,
    style: LadderStyle,
) -> Result<Circuit> {
    let mut d_dag = Circuit::new(n_qubits);
    for rot in sched.rotations() {
        d_dag.append(&givens_gate(rot.mu, rot.nu, rot.theta, l, n_qubits, style)?)?;
    }
    let mut c = d_dag.clone();
    for q in 0..l {
        c.x(q)?;
    }
    c.append(&d_dag.inverse())?;
    Ok(c)
}

/// Circuit whose operator is `Σ_μ x_μ p^{(L)}_μ` for a unit vector `x`.
pub fn clifford_loader(x: &[f64], l: usize, style: LadderStyle) -> Result<Circuit> {
    if l == 0 {
        return Err(Error::Dimension("L must be positive".into()));
    }
    let sched = compute_angles(x)?;
    let mut c = schedule_circuit(&sched, l, l * x.len(), style)?;
    // A single mode has no rotation to carry the sign of x = (−1);
    // RotZ(2π) = −I supplies it.
    if x.len() == 1 && x[0] < 0.0 {
        c.rz(0, 2.0 * PI)?;
    }
    Ok(c)
}

/// Angle schedules of every loader in a preparation circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoaderPlan {
    pub n_qubits: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub columns: Vec<GivensSchedule>,
    /// Signs of the single-mode columns, which carry no angle.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negate: Vec<usize>,
    pub hole_trick: bool,
}

impl LoaderPlan {
    /// One loader per column of `m`, column 1 first.
    pub fn new(m: &OrthonormalMatrix, l: usize) -> Result<Self> {
        Self::from_columns(m, l, false)
    }

    /// Loaders for the complement columns, to be followed by `X` on every
    /// qubit. `complement` must have `rows − cols` columns orthogonal to `m`.
    pub fn with_holes(m: &OrthonormalMatrix, complement: &OrthonormalMatrix, l: usize) -> Result<Self> {
        if complement.rows() != m.rows() || complement.cols() + m.cols() != m.rows() {
            return Err(Error::Dimension(format!(
                "complement is {}×{}, need {}×{}",
                complement.rows(),
                complement.cols(),
                m.rows(),
                m.rows() - m.cols()
            )));
        }
        let overlap = (0..m.cols())
            .flat_map(|a| (0..complement.cols()).map(move |b| (a, b)))
            .map(|(a, b)| {
                (0..m.rows())
                    .map(|r| m.get(r, a) * complement.get(r, b))
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max);
        if overlap > ORTHO_TOL.max(1e-10) {
            return Err(Error::NotOrthonormal(overlap));
        }
        Self::from_columns(complement, l, true)
    }

    fn from_columns(m: &OrthonormalMatrix, l: usize, hole_trick: bool) -> Result<Self> {
        if l == 0 {
            return Err(Error::Dimension("L must be positive".into()));
        }
        let columns = (0..m.cols())
            .map(|c| compute_angles(&m.column(c)))
            .collect::<Result<Vec<_>>>()?;
        let negate = if m.rows() == 1 {
            (0..m.cols()).filter(|&c| m.get(0, c) < 0.0).collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            n_qubits: l * m.rows(),
            l,
            columns,
            negate,
            hole_trick,
        })
    }

    pub fn circuit(&self, style: LadderStyle) -> Result<Circuit> {
        let mut c = Circuit::new(self.n_qubits);
        for (i, sched) in self.columns.iter().enumerate() {
            if sched.n * self.l != self.n_qubits {
                return Err(Error::Dimension(format!(
                    "schedule over {} modes in a {}-qubit plan with L = {}",
                    sched.n, self.n_qubits, self.l
                )));
            }
            c.append(&schedule_circuit(sched, self.l, self.n_qubits, style)?)?;
            if self.negate.contains(&i) {
                c.rz(0, 2.0 * PI)?;
            }
        }
        if self.hole_trick {
            for q in 0..self.n_qubits {
                c.x(q)?;
            }
        }
        Ok(c)
    }
}

/// Loaders for the columns of `m` in order, column 1 acting first. The hole
/// trick needs a complement and goes through [`prepare_hole_circuit`].
pub fn prepare_state_circuit(
    m: &OrthonormalMatrix,
    l: usize,
    style: LadderStyle,
    hole_trick: bool,
) -> Result<Circuit> {
    if hole_trick {
        return Err(Error::MissingComplement);
    }
    LoaderPlan::new(m, l)?.circuit(style)
}

pub fn prepare_hole_circuit(
    m: &OrthonormalMatrix,
    complement: &OrthonormalMatrix,
    l: usize,
    style: LadderStyle,
) -> Result<Circuit> {
    LoaderPlan::with_holes(m, complement, l)?.circuit(style)
}

/// L-wise correlated state from the `(N/L) × (d/L)` matrix `g`.
pub fn prepare_correlated_circuit(g: &OrthonormalMatrix, l: usize, style: LadderStyle) -> Result<Circuit> {
    prepare_state_circuit(g, l, style, false)
}
