//! Exact statevector simulation.
//!
//! Amplitude index `i` holds qubit `q` in bit `q`; the Fock string
//! `|b₁b₂…b_N⟩` (mode 1 first) is index `Σ b_q 2^{q−1}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::circuit::{Circuit, Gate};
use crate::pauli::{i_pow, PauliSum};
use crate::{Error, Result};

pub const MAX_QUBITS: usize = 24;
pub const NORM_TOL: f64 = 1e-10;

/// Below this many amplitudes every kernel runs sequentially.
const PAR_THRESHOLD: usize = 1 << 14;
const PAR_CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`
    pub fn zeros(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, 0)
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        check_size(n_qubits)?;
        if index >> n_qubits != 0 {
            return Err(Error::Dimension(format!(
                "basis index {index} does not fit {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wrap amplitudes that are already normalized within [`NORM_TOL`].
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {n_qubits} qubits",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Normalize arbitrary non-zero amplitudes.
    pub fn normalized(n_qubits: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(n_qubits, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Multiply every amplitude by `phase` (unit modulus).
    pub fn scale(&mut self, phase: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= phase);
    }

    pub fn apply(&mut self, g: &Gate) {
        match *g {
            Gate::CNot { control, target } => apply_cx(&mut self.amps, control, target),
            Gate::PauliX { qubit } => for_each_block(&mut self.amps, qubit, |_, lo, hi| lo.swap_with_slice(hi)),
            Gate::Hadamard { qubit } => apply_h(&mut self.amps, qubit),
            _ => apply_1q(&mut self.amps, g.qubits().0, &g.matrix_1q().unwrap()),
        }
    }

    /// Non-negligible amplitudes as `(bitstring, re, im)`, index order.
    pub fn dump(&self, threshold: f64) -> Vec<AmplitudeEntry> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(i, a)| AmplitudeEntry(bitstring(i, self.n_qubits), a.re, a.im))
            .collect()
    }
}

/// One row of the amplitude dump: `["1100", re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeEntry(pub String, pub f64, pub f64);

/// Fock string of an index, mode 1 first.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`bitstring`].
pub fn index_of(bits: &str) -> Result<usize> {
    bits.chars().enumerate().try_fold(0usize, |acc, (q, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << q),
        _ => Err(Error::Dimension(format!("bad bitstring {bits:?}"))),
    })
}

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "statevector simulation",
            limit: MAX_QUBITS,
            got: n_qubits,
        });
    }
    Ok(())
}

/// Call `f(base, lo, hi)` on matching slices of the `bit q = 0` and
/// `bit q = 1` halves, covering every index once; `base` is the index of
/// `lo[0]` and all slice lengths are powers of two.
fn for_each_block<F>(amps: &mut [Complex64], q: usize, f: F)
where
    F: Fn(usize, &mut [Complex64], &mut [Complex64]) + Sync,
{
    let stride = 1usize << q;
    let block = 2 * stride;
    let split = |k: usize, chunk: &mut [Complex64]| {
        let (lo, hi) = chunk.split_at_mut(stride);
        f(k * block, lo, hi);
    };
    if amps.len() < PAR_THRESHOLD {
        amps.chunks_mut(block).enumerate().for_each(|(k, c)| split(k, c));
    } else if stride >= PAR_CHUNK {
        for (k, chunk) in amps.chunks_mut(block).enumerate() {
            let (lo, hi) = chunk.split_at_mut(stride);
            lo.par_chunks_mut(PAR_CHUNK)
                .zip(hi.par_chunks_mut(PAR_CHUNK))
                .enumerate()
                .for_each(|(c, (lo, hi))| f(k * block + c * PAR_CHUNK, lo, hi));
        }
    } else {
        let per_task = PAR_CHUNK / block;
        amps.par_chunks_mut(PAR_CHUNK).enumerate().for_each(|(t, group)| {
            group
                .chunks_mut(block)
                .enumerate()
                .for_each(|(k, c)| split(t * per_task + k, c));
        });
    }
}

fn apply_1q(amps: &mut [Complex64], q: usize, m: &[[Complex64; 2]; 2]) {
    let zero = Complex64::new(0.0, 0.0);
    if m[0][1] == zero && m[1][0] == zero {
        let (d0, d1) = (m[0][0], m[1][1]);
        for_each_block(amps, q, |_, lo, hi| {
            lo.iter_mut().for_each(|a| *a *= d0);
            hi.iter_mut().for_each(|b| *b *= d1);
        });
    } else {
        for_each_block(amps, q, |_, lo, hi| {
            for (a, b) in lo.iter_mut().zip(hi) {
                let (x, y) = (*a, *b);
                *a = m[0][0] * x + m[0][1] * y;
                *b = m[1][0] * x + m[1][1] * y;
            }
        });
    }
}

fn apply_h(amps: &mut [Complex64], q: usize) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for_each_block(amps, q, |_, lo, hi| {
        for (a, b) in lo.iter_mut().zip(hi) {
            let (x, y) = (*a, *b);
            *a = (x + y) * h;
            *b = (x - y) * h;
        }
    });
}

fn apply_cx(amps: &mut [Complex64], control: usize, target: usize) {
    if control > target {
        // A block never straddles a change of the control bit.
        for_each_block(amps, target, |base, lo, hi| {
            if base >> control & 1 == 1 {
                lo.swap_with_slice(hi);
            }
        });
    } else {
        let run = 1usize << control;
        for_each_block(amps, target, |base, lo, hi| {
            let run = run.min(lo.len());
            for j in (0..lo.len()).step_by(run) {
                if (base + j) >> control & 1 == 1 {
                    lo[j..j + run].swap_with_slice(&mut hi[j..j + run]);
                }
            }
        });
    }
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Run `c` on `initial`, or on `|0…0⟩` when `None`.
pub fn run(c: &Circuit, initial: Option<StateVector>) -> Result<StateVector> {
    let mut psi = match initial {
        Some(s) => s,
        None => StateVector::zeros(c.n_qubits())?,
    };
    if psi.n_qubits != c.n_qubits() {
        return Err(Error::Dimension(format!(
            "{}-qubit circuit on a {}-qubit state",
            c.n_qubits(),
            psi.n_qubits
        )));
    }
    // Runs of single-qubit gates are fused per qubit and flushed when a
    // CNOT touches the qubit.
    let mut pending: Vec<Option<[[Complex64; 2]; 2]>> = vec![None; psi.n_qubits];
    let flush = |psi: &mut StateVector, slot: &mut Option<[[Complex64; 2]; 2]>, q: usize| {
        if let Some(m) = slot.take() {
            apply_1q(&mut psi.amps, q, &m);
        }
    };
    for g in c.gates() {
        match *g {
            Gate::CNot { control, target } => {
                flush(&mut psi, &mut pending[control], control);
                flush(&mut psi, &mut pending[target], target);
                psi.apply(g);
            }
            _ => {
                let q = g.qubits().0;
                let m = g.matrix_1q().unwrap();
                pending[q] = Some(match pending[q] {
                    Some(prev) => mat_mul(&m, &prev),
                    None => m,
                });
            }
        }
    }
    for (q, slot) in pending.iter_mut().enumerate() {
        flush(&mut psi, slot, q);
    }
    Ok(psi)
}

/// Terms sharing one X mask: each `(z, c · i^{#Y})`.
struct FlipGroup {
    x: usize,
    terms: Vec<(usize, Complex64)>,
}

fn flip_groups(h: &PauliSum) -> Vec<FlipGroup> {
    let mut by_x: BTreeMap<u64, Vec<(usize, Complex64)>> = BTreeMap::new();
    for (c, s) in h.terms() {
        let ny = (s.x_mask() & s.z_mask()).count_ones() as u8;
        by_x.entry(s.x_mask())
            .or_default()
            .push((s.z_mask() as usize, i_pow(ny) * c));
    }
    by_x.into_iter()
        .map(|(x, terms)| FlipGroup {
            x: x as usize,
            terms,
        })
        .collect()
}

/// `⟨ψ|h|ψ⟩`, accumulated term group by term group over the amplitudes
/// without forming any matrix. Partial sums are reduced in index order.
pub fn expectation(h: &PauliSum, psi: &StateVector) -> Result<f64> {
    if h.n_qubits() != psi.n_qubits {
        return Err(Error::Dimension(format!(
            "{}-qubit operator on a {}-qubit state",
            h.n_qubits(),
            psi.n_qubits
        )));
    }
    let groups = flip_groups(h);
    let amps = &psi.amps;
    // Occupancy bitmap of exactly non-zero amplitudes; far smaller than the
    // amplitude array, so partner lookups mostly stay in cache.
    let nonzero: Vec<u64> = amps
        .chunks(64)
        .map(|w| {
            w.iter()
                .enumerate()
                .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
                .fold(0u64, |m, (k, _)| m | 1 << k)
        })
        .collect();
    let is_set = |j: usize| nonzero[j >> 6] >> (j & 63) & 1 == 1;
    let chunk_sum = |range: std::ops::Range<usize>| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in range {
            if !is_set(i) {
                continue;
            }
            let a = amps[i];
            for g in &groups {
                if !is_set(i ^ g.x) {
                    continue;
                }
                let b = amps[i ^ g.x];
                let mut coeff = Complex64::new(0.0, 0.0);
                for &(z, c) in &g.terms {
                    if (i & z).count_ones() % 2 == 0 {
                        coeff += c;
                    } else {
                        coeff -= c;
                    }
                }
                acc += b.conj() * coeff * a;
            }
        }
        acc
    };
    let len = amps.len();
    let total: Complex64 = if len < PAR_THRESHOLD {
        chunk_sum(0..len)
    } else {
        let partial: Vec<Complex64> = (0..len.div_ceil(PAR_CHUNK))
            .into_par_iter()
            .map(|k| chunk_sum(k * PAR_CHUNK..((k + 1) * PAR_CHUNK).min(len)))
            .collect();
        partial.into_iter().sum()
    };
    debug_assert!(total.im.abs() < 1e-8 * (1.0 + total.re.abs()));
    Ok(total.re)
}

/// Mean and variance of the total occupation `Σ_q (I − Z_q)/2`.
pub fn particle_number_moments(psi: &StateVector) -> (f64, f64) {
    let (mut m1, mut m2) = (0.0, 0.0);
    for (i, a) in psi.amps.iter().enumerate() {
        let p = a.norm_sqr();
        let k = i.count_ones() as f64;
        m1 += p * k;
        m2 += p * k * k;
    }
    (m1, (m2 - m1 * m1).max(0.0))
}

pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::Dimension(format!(
            "{}-qubit and {}-qubit states",
            a.n_qubits, b.n_qubits
        )));
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// `|⟨a|b⟩|²`
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner_product(a, b)?.norm_sqr().min(1.0))
}
