//! Pauli strings in symplectic form and sums of them.
//!
//! A string stores an X mask and a Z mask (bit `q` is qubit `q`) plus a phase
//! `i^k`. A qubit with both bits set carries the letter `Y` itself, so a string
//! with phase `+1` is always Hermitian.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// `i^phase · σ_0 ⊗ σ_1 ⊗ …` with `σ_q` given by bit `q` of the two masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
    phase: u8,
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_masks(n_qubits, 0, 0, 0)
    }

    pub fn from_masks(n_qubits: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Dimension(format!(
                "Pauli strings support 1..={MAX_QUBITS} qubits, got {n_qubits}"
            )));
        }
        if (x | z) & !mask(n_qubits) != 0 {
            return Err(Error::Dimension(format!(
                "masks reach beyond {n_qubits} qubits"
            )));
        }
        Ok(Self {
            n_qubits,
            x,
            z,
            phase: phase % 4,
        })
    }

    /// Build from `(qubit, letter)` pairs; qubits are zero-based.
    pub fn from_letters(n_qubits: usize, letters: &[(usize, Letter)]) -> Result<Self> {
        let mut s = Self::identity(n_qubits)?;
        for &(q, l) in letters {
            if q >= n_qubits {
                return Err(Error::Dimension(format!(
                    "qubit {q} out of range for {n_qubits} qubits"
                )));
            }
            let (bx, bz) = l.bits();
            s.x = (s.x & !(1 << q)) | ((bx as u64) << q);
            s.z = (s.z & !(1 << q)) | ((bz as u64) << q);
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Exponent `k` of the phase `i^k`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_value(&self) -> Complex64 {
        i_pow(self.phase)
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| (self.x | self.z) >> q & 1 == 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Same letters, phase `+1`.
    pub fn unsigned(&self) -> Self {
        Self { phase: 0, ..*self }
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self {
            phase: phase % 4,
            ..*self
        }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Dense `2^n × 2^n` matrix in the crate's little-endian basis order.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > 12 {
            return Err(Error::TooLarge {
                what: "dense Pauli matrices",
                limit: 12,
                got: self.n_qubits,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        let y_phase = (self.x & self.z).count_ones() as u8;
        for col in 0..dim {
            let row = col ^ self.x as usize;
            let sign = if (col as u64 & self.z).count_ones() % 2 == 1 { 2 } else { 0 };
            m[(row, col)] = i_pow(self.phase + y_phase + sign);
        }
        Ok(m)
    }
}

pub(crate) fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Exponent of `i` picked up by the single-qubit product `σ_a σ_b`.
fn letter_product_phase(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x1, z1, x2, z2) = (x1 as i32, z1 as i32, x2 as i32, z2 as i32);
    match (x1, z1) {
        (0, 0) => 0,
        (1, 1) => z2 - x2,
        (1, 0) => z2 * (2 * x2 - 1),
        _ => x2 * (1 - 2 * z2),
    }
}

/// Letterwise product with accumulated phase.
pub fn multiply(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::Dimension(format!(
            "cannot multiply {}-qubit and {}-qubit strings",
            a.n_qubits, b.n_qubits
        )));
    }
    let mut exp = a.phase as i32 + b.phase as i32;
    let mut active = (a.x | a.z) & (b.x | b.z);
    while active != 0 {
        let q = active.trailing_zeros();
        active &= active - 1;
        exp += letter_product_phase(
            a.x >> q & 1 == 1,
            a.z >> q & 1 == 1,
            b.x >> q & 1 == 1,
            b.z >> q & 1 == 1,
        );
    }
    Ok(PauliString {
        n_qubits: a.n_qubits,
        x: a.x ^ b.x,
        z: a.z ^ b.z,
        phase: exp.rem_euclid(4) as u8,
    })
}

impl std::ops::Mul for PauliString {
    type Output = PauliString;

    /// Panics on a size mismatch; use [`multiply`] for the fallible form.
    fn mul(self, rhs: Self) -> Self {
        multiply(&self, &rhs).expect("Pauli string size mismatch")
    }
}

/// The anti-commuting block operator `p^{(L)}_μ`: `Z` on qubits
/// `L, 2L, …, L(μ−1)` and `X` on `L(μ−1)+1 … Lμ` (1-based). With `L = 1`
/// this is the Jordan–Wigner image `Z^{⊗μ−1} X_μ` of `a†_μ + a_μ`.
pub fn p_operator(mu: usize, l: usize, n_qubits: usize) -> Result<PauliString> {
    if l == 0 || n_qubits % l != 0 {
        return Err(Error::Dimension(format!(
            "L = {l} does not divide {n_qubits} qubits"
        )));
    }
    if mu == 0 || mu > n_qubits / l {
        return Err(Error::Dimension(format!(
            "mode index {mu} outside 1..={}",
            n_qubits / l
        )));
    }
    let mut letters = Vec::with_capacity(mu + l);
    for j in 1..mu {
        letters.push((j * l - 1, Letter::Z));
    }
    for q in l * (mu - 1)..l * mu {
        letters.push((q, Letter::X));
    }
    PauliString::from_letters(n_qubits, &letters)
}

/// Residual `{p^{(L)}_μ, p^{(L)}_ν} − 2δ_{μν} I`, formed symbolically.
pub fn anticommutator_residual(
    mu: usize,
    nu: usize,
    l: usize,
    n_qubits: usize,
) -> Result<PauliOperator> {
    let a = p_operator(mu, l, n_qubits)?;
    let b = p_operator(nu, l, n_qubits)?;
    let mut acc = PauliOperator::zero(n_qubits);
    acc.add_string(Complex64::new(1.0, 0.0), &multiply(&a, &b)?);
    acc.add_string(Complex64::new(1.0, 0.0), &multiply(&b, &a)?);
    if mu == nu {
        acc.add_string(Complex64::new(-2.0, 0.0), &PauliString::identity(n_qubits)?);
    }
    acc.prune(0.0);
    Ok(acc)
}

/// Sum of absolute coefficients of the anticommutator residual, an upper
/// bound on its operator norm that vanishes exactly when the residual does.
pub fn anticommutator_norm(mu: usize, nu: usize, l: usize, n_qubits: usize) -> Result<f64> {
    Ok(anticommutator_residual(mu, nu, l, n_qubits)?.one_norm())
}

/// `⟨b|s|b⟩` for a computational basis state: `±1` for I/Z-only strings with
/// real phase, `0` when the string flips any qubit.
pub fn expectation_sign_table(s: &PauliString, basis_state: u64) -> Result<i8> {
    if basis_state & !mask(s.n_qubits) != 0 {
        return Err(Error::Dimension(format!(
            "basis state {basis_state:#b} does not fit {} qubits",
            s.n_qubits
        )));
    }
    if s.x != 0 {
        return Ok(0);
    }
    let parity = (basis_state & s.z).count_ones() % 2;
    let value: i8 = if parity == 0 { 1 } else { -1 };
    match s.phase {
        0 => Ok(value),
        2 => Ok(-value),
        _ => Err(Error::NotHermitian(format!("{s} has an imaginary phase"))),
    }
}

impl fmt::Display for PauliString {
    /// `"-i X I Z Y"`: the phase, then one letter per qubit from qubit 0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phase = ["+1", "+i", "-1", "-i"][self.phase as usize];
        write!(f, "{phase}")?;
        for q in 0..self.n_qubits {
            write!(f, " {}", self.letter(q).symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace().peekable();
        let phase = match tokens.peek().copied() {
            Some("+1") | Some("1") => 0,
            Some("+i") | Some("i") => 1,
            Some("-1") => 2,
            Some("-i") => 3,
            _ => 4,
        };
        if phase < 4 {
            tokens.next();
        }
        let letters: String = tokens.collect();
        let mut out = Vec::with_capacity(letters.len());
        for (q, c) in letters.chars().enumerate() {
            let l = match c {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                _ => return Err(Error::Dimension(format!("bad Pauli letter {c:?}"))),
            };
            out.push((q, l));
        }
        Ok(PauliString::from_letters(out.len(), &out)?.with_phase(phase % 4))
    }
}

/// Complex combination of Pauli strings, keyed by `(x, z)` masks with the
/// phase folded into the coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOperator {
    n_qubits: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliOperator {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn add_string(&mut self, coeff: Complex64, s: &PauliString) {
        debug_assert_eq!(s.n_qubits, self.n_qubits);
        *self.terms.entry((s.x, s.z)).or_default() += coeff * s.phase_value();
    }

    pub fn add(&mut self, other: &PauliOperator) {
        for (k, v) in &other.terms {
            *self.terms.entry(*k).or_default() += v;
        }
    }

    pub fn scale(&mut self, f: Complex64) {
        self.terms.values_mut().for_each(|v| *v *= f);
    }

    /// Drop terms with `|c| ≤ tol`.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, v| v.norm() > tol);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.terms.iter().map(move |(&(x, z), &c)| {
            (
                PauliString {
                    n_qubits: self.n_qubits,
                    x,
                    z,
                    phase: 0,
                },
                c,
            )
        })
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        let mut out = PauliOperator::zero(self.n_qubits);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_string(ca * cb, &multiply(&a, &b)?);
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> PauliOperator {
        Self {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }

    /// `[self, other]`, pruned at `tol`.
    pub fn commutator(&self, other: &PauliOperator, tol: f64) -> Result<PauliOperator> {
        let mut out = self.multiply(other)?;
        let mut rev = other.multiply(self)?;
        rev.scale(Complex64::new(-1.0, 0.0));
        out.add(&rev);
        out.prune(tol);
        Ok(out)
    }

    /// Hermitian real form; fails if any coefficient has `|Im c| > tol`.
    pub fn to_pauli_sum(&self, tol: f64) -> Result<PauliSum> {
        let mut sum = PauliSum::new(self.n_qubits);
        for (s, c) in self.terms() {
            if c.im.abs() > tol {
                return Err(Error::NotHermitian(format!(
                    "term {s} has coefficient {c}"
                )));
            }
            sum.add_term(c.re, s)?;
        }
        Ok(sum)
    }
}

/// Real linear combination of phase-free Pauli strings (Hermitian by
/// construction), deduplicated by letter pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<(u64, u64), f64>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Add `coeff · s`. A phase of `−1` folds into the coefficient; an
    /// imaginary phase would make the sum non-Hermitian and is rejected.
    pub fn add_term(&mut self, coeff: f64, s: PauliString) -> Result<()> {
        if s.n_qubits != self.n_qubits {
            return Err(Error::Dimension(format!(
                "{}-qubit term in a {}-qubit sum",
                s.n_qubits, self.n_qubits
            )));
        }
        if !coeff.is_finite() {
            return Err(Error::NotHermitian(format!("non-finite coefficient on {s}")));
        }
        let sign = match s.phase {
            0 => 1.0,
            2 => -1.0,
            _ => {
                return Err(Error::NotHermitian(format!(
                    "{s} has an imaginary phase"
                )))
            }
        };
        *self.terms.entry((s.x, s.z)).or_default() += sign * coeff;
        Ok(())
    }

    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, v| v.abs() > tol);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (f64, PauliString)> + '_ {
        self.terms.iter().map(move |(&(x, z), &c)| {
            (
                c,
                PauliString {
                    n_qubits: self.n_qubits,
                    x,
                    z,
                    phase: 0,
                },
            )
        })
    }

    pub fn to_operator(&self) -> PauliOperator {
        let mut op = PauliOperator::zero(self.n_qubits);
        for (c, s) in self.terms() {
            op.add_string(Complex64::new(c, 0.0), &s);
        }
        op
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (c, s) in self.terms() {
            m += s.to_dense()? * Complex64::new(c, 0.0);
        }
        Ok(m)
    }
}

/// JSON form of a Pauli sum: letters are written qubit 0 first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTermJson {
    pub coeff: f64,
    pub pauli: String,
}

impl PauliSum {
    pub fn to_json_terms(&self) -> Vec<PauliTermJson> {
        self.terms()
            .map(|(c, s)| PauliTermJson {
                coeff: c,
                pauli: (0..s.n_qubits).map(|q| s.letter(q).symbol()).collect(),
            })
            .collect()
    }

    pub fn from_json_terms(n_qubits: usize, terms: &[PauliTermJson]) -> Result<Self> {
        let mut sum = PauliSum::new(n_qubits);
        for t in terms {
            let s: PauliString = t.pauli.parse()?;
            sum.add_term(t.coeff, s)?;
        }
        Ok(sum)
    }
}
