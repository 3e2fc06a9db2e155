//! FCIDUMP ingestion, Jordan–Wigner molecular Hamiltonians, and HF / FCI
//! reference energies.
//!
//! Spin orbitals are interleaved: spatial orbital `p` (1-based) occupies
//! qubits `2p−1` (α) and `2p` (β), i.e. 0-based qubits `2(p−1)` and `2p−1`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write;

use crate::ortho::combinations;
use crate::pauli::{expectation_sign_table, i_pow, PauliOperator, PauliString, PauliSum, PauliTermJson};
use crate::sim::{self, StateVector};
use crate::{Error, Result};

/// Largest orbital count the dense integral tables accept.
pub const MAX_PARSE_ORBITALS: usize = 32;
pub const MAX_JW_ORBITALS: usize = 12;
pub const MAX_FCI_QUBITS: usize = 16;
pub const COEFF_TOL: f64 = 1e-12;
/// Sector dimension above which FCI switches from dense to Lanczos.
pub const DENSE_FCI_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("fcidump line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("missing &FCI namelist")]
    MissingNamelist,
    #[error("unterminated namelist")]
    UnterminatedNamelist,
    #[error("namelist has no {0}")]
    MissingKey(&'static str),
    #[error("bad value for {key}: {value:?}")]
    BadNamelistValue { key: &'static str, value: String },
    #[error("{0} orbitals exceeds the parser limit")]
    TooManyOrbitals(usize),
    #[error("expected 5 fields, found {0}")]
    FieldCount(usize),
    #[error("non-numeric field {0:?}")]
    NotNumeric(String),
    #[error("orbital index {index} outside 0..={n_orb}")]
    IndexOutOfRange { index: usize, n_orb: usize },
    #[error("index pattern {0:?} is neither core, one- nor two-electron")]
    BadIndexPattern([usize; 4]),
}

fn perr(line: usize, kind: ParseErrorKind) -> Error {
    Error::Fcidump(ParseError { line, kind })
}

/// Restricted integrals with dense storage, 0-based internally.
#[derive(Debug, Clone, PartialEq)]
pub struct FciDump {
    pub n_orb: usize,
    pub n_elec: usize,
    pub ms2: i64,
    pub core_energy: f64,
    h1: Vec<f64>,
    g2: Vec<f64>,
}

impl FciDump {
    pub fn new(n_orb: usize, n_elec: usize) -> Self {
        Self {
            n_orb,
            n_elec,
            ms2: 0,
            core_energy: 0.0,
            h1: vec![0.0; n_orb * n_orb],
            g2: vec![0.0; n_orb.pow(4)],
        }
    }

    /// `h_pq`, 1-based.
    pub fn h1(&self, p: usize, q: usize) -> f64 {
        self.h1[(p - 1) * self.n_orb + q - 1]
    }

    /// `(ij|kl)`, 1-based.
    pub fn g2(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.g2[self.g_index(i - 1, j - 1, k - 1, l - 1)]
    }

    fn g_index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n_orb + j) * self.n_orb + k) * self.n_orb + l
    }

    pub fn set_h1(&mut self, p: usize, q: usize, v: f64) {
        let n = self.n_orb;
        self.h1[(p - 1) * n + q - 1] = v;
        self.h1[(q - 1) * n + p - 1] = v;
    }

    /// Store `(ij|kl)` and its seven symmetric images.
    pub fn set_g2(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let (i, j, k, l) = (i - 1, j - 1, k - 1, l - 1);
        for (a, b, c, d) in [
            (i, j, k, l),
            (j, i, k, l),
            (i, j, l, k),
            (j, i, l, k),
            (k, l, i, j),
            (l, k, i, j),
            (k, l, j, i),
            (l, k, j, i),
        ] {
            let idx = self.g_index(a, b, c, d);
            self.g2[idx] = v;
        }
    }

    /// Canonical text: header, then the unique non-zero two-electron,
    /// one-electron and core lines.
    pub fn to_fcidump(&self) -> String {
        let n = self.n_orb;
        let mut out = String::new();
        writeln!(out, " &FCI NORB={n},NELEC={},MS2={},", self.n_elec, self.ms2).unwrap();
        writeln!(out, "  ORBSYM={}", "1,".repeat(n)).unwrap();
        out.push_str("  ISYM=1,\n &END\n");
        for i in 1..=n {
            for j in 1..=i {
                for k in 1..=n {
                    for l in 1..=k {
                        if (i * (i - 1) / 2 + j) < (k * (k - 1) / 2 + l) {
                            continue;
                        }
                        let v = self.g2(i, j, k, l);
                        if v != 0.0 {
                            writeln!(out, "{v:e} {i} {j} {k} {l}").unwrap();
                        }
                    }
                }
            }
        }
        for p in 1..=n {
            for q in 1..=p {
                let v = self.h1(p, q);
                if v != 0.0 {
                    writeln!(out, "{v:e} {p} {q} 0 0").unwrap();
                }
            }
        }
        writeln!(out, "{:e} 0 0 0 0", self.core_energy).unwrap();
        out
    }
}

fn namelist_value<'a>(header: &'a str, key: &'static str) -> Option<&'a str> {
    let upper = header.to_ascii_uppercase();
    let mut from = 0;
    while let Some(pos) = upper[from..].find(key) {
        let at = from + pos;
        let before_ok = at == 0 || !upper.as_bytes()[at - 1].is_ascii_alphanumeric();
        let rest = header[at + key.len()..].trim_start();
        if before_ok {
            if let Some(v) = rest.strip_prefix('=') {
                let v = v.trim_start();
                let end = v.find([',', '/', '&', '\n', ' ']).unwrap_or(v.len());
                return Some(&v[..end]);
            }
        }
        from = at + key.len();
    }
    None
}

fn namelist_int(header: &str, key: &'static str, line: usize, required: bool) -> Result<Option<i64>> {
    match namelist_value(header, key) {
        Some(v) => v.trim().parse().map(Some).map_err(|_| {
            perr(
                line,
                ParseErrorKind::BadNamelistValue {
                    key,
                    value: v.to_string(),
                },
            )
        }),
        None if required => Err(perr(line, ParseErrorKind::MissingKey(key))),
        None => Ok(None),
    }
}

pub fn parse_fcidump(text: &str) -> Result<FciDump> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines
        .iter()
        .position(|l| !l.trim().is_empty())
        .ok_or_else(|| perr(1, ParseErrorKind::MissingNamelist))?;
    if !lines[start].trim_start().to_ascii_uppercase().starts_with("&FCI") {
        return Err(perr(start + 1, ParseErrorKind::MissingNamelist));
    }
    let end = (start..lines.len())
        .find(|&i| {
            let t = lines[i].trim().to_ascii_uppercase();
            t.ends_with("&END") || t == "/" || t.ends_with("/")
        })
        .ok_or_else(|| perr(lines.len(), ParseErrorKind::UnterminatedNamelist))?;
    let header = lines[start..=end].join("\n");
    let header_line = start + 1;
    let norb = namelist_int(&header, "NORB", header_line, true)?.unwrap();
    let nelec = namelist_int(&header, "NELEC", header_line, true)?.unwrap();
    let ms2 = namelist_int(&header, "MS2", header_line, false)?.unwrap_or(0);
    if norb < 0 {
        return Err(perr(
            header_line,
            ParseErrorKind::BadNamelistValue {
                key: "NORB",
                value: norb.to_string(),
            },
        ));
    }
    if nelec < 0 || nelec > 2 * norb {
        return Err(perr(
            header_line,
            ParseErrorKind::BadNamelistValue {
                key: "NELEC",
                value: nelec.to_string(),
            },
        ));
    }
    let n_orb = norb as usize;
    if n_orb > MAX_PARSE_ORBITALS {
        return Err(perr(header_line, ParseErrorKind::TooManyOrbitals(n_orb)));
    }
    let mut f = FciDump::new(n_orb, nelec as usize);
    f.ms2 = ms2;
    for (i, raw) in lines.iter().enumerate().skip(end + 1) {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(perr(line, ParseErrorKind::FieldCount(fields.len())));
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "e")
            .parse()
            .map_err(|_| perr(line, ParseErrorKind::NotNumeric(fields[0].into())))?;
        let mut idx = [0usize; 4];
        for (slot, s) in idx.iter_mut().zip(&fields[1..]) {
            *slot = s
                .parse()
                .map_err(|_| perr(line, ParseErrorKind::NotNumeric((*s).into())))?;
            if *slot > n_orb {
                return Err(perr(line, ParseErrorKind::IndexOutOfRange { index: *slot, n_orb }));
            }
        }
        match idx {
            [0, 0, 0, 0] => f.core_energy = value,
            [p, q, 0, 0] if p > 0 && q > 0 => f.set_h1(p, q, value),
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => f.set_g2(i, j, k, l, value),
            _ => return Err(perr(line, ParseErrorKind::BadIndexPattern(idx))),
        }
    }
    Ok(f)
}

/// Qubit Hamiltonian `constant · I + pauli`, where `pauli` has no identity
/// term.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularHamiltonian {
    pub n_qubits: usize,
    pub pauli: PauliSum,
    pub constant: f64,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianJson {
    n_qubits: usize,
    constant: f64,
    terms: Vec<PauliTermJson>,
}

impl MolecularHamiltonian {
    pub fn energy(&self, psi: &StateVector) -> Result<f64> {
        Ok(self.constant + sim::expectation(&self.pauli, psi)?)
    }

    /// Everything as one sum, the constant on the identity string.
    pub fn full_sum(&self) -> Result<PauliSum> {
        let mut s = self.pauli.clone();
        s.add_term(self.constant, PauliString::identity(self.n_qubits)?)?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&HamiltonianJson {
            n_qubits: self.n_qubits,
            constant: self.constant,
            terms: self.pauli.to_json_terms(),
        })
        .unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: HamiltonianJson = serde_json::from_str(text)?;
        Ok(Self {
            n_qubits: j.n_qubits,
            pauli: PauliSum::from_json_terms(j.n_qubits, &j.terms)?,
            constant: j.constant,
        })
    }
}

/// `a†_q` (create) or `a_q` on 0-based qubit `q` with a `Z` string below it.
fn ladder_op(q: usize, n: usize, create: bool) -> Result<PauliOperator> {
    let z_string = (1u64 << q) - 1;
    let bit = 1u64 << q;
    let mut op = PauliOperator::zero(n);
    let half = Complex64::new(0.5, 0.0);
    op.add_string(half, &PauliString::from_masks(n, bit, z_string, 0)?);
    // Y written as a letter; a† = (X − iY)/2, a = (X + iY)/2.
    let sign = if create { -1.0 } else { 1.0 };
    op.add_string(
        Complex64::new(0.0, 0.5 * sign),
        &PauliString::from_masks(n, bit, z_string | bit, 0)?,
    );
    Ok(op)
}

/// Number operator `Σ_q (I − Z_q)/2` on `n` qubits.
pub fn number_operator(n: usize) -> Result<PauliSum> {
    let mut s = PauliSum::new(n);
    for q in 0..n {
        s.add_term(0.5, PauliString::identity(n)?)?;
        s.add_term(-0.5, PauliString::from_masks(n, 0, 1 << q, 0)?)?;
    }
    Ok(s)
}

pub fn jw_hamiltonian(f: &FciDump) -> Result<MolecularHamiltonian> {
    if f.n_orb == 0 || f.n_orb > MAX_JW_ORBITALS {
        return Err(Error::TooLarge {
            what: "Jordan–Wigner Hamiltonian",
            limit: 2 * MAX_JW_ORBITALS,
            got: 2 * f.n_orb,
        });
    }
    let n = 2 * f.n_orb;
    let up: Vec<PauliOperator> = (0..n).map(|q| ladder_op(q, n, true)).collect::<Result<_>>()?;
    let down: Vec<PauliOperator> = (0..n).map(|q| ladder_op(q, n, false)).collect::<Result<_>>()?;
    let so = |p: usize, spin: usize| 2 * (p - 1) + spin;
    let mut h = PauliOperator::zero(n);
    h.add_string(Complex64::new(f.core_energy, 0.0), &PauliString::identity(n)?);

    // a†_p a_q, cached since every two-body term is built from two of them.
    let mut hop: HashMap<(usize, usize), PauliOperator> = HashMap::new();
    let mut hopping = |a: usize, b: usize| -> Result<PauliOperator> {
        if let Some(op) = hop.get(&(a, b)) {
            return Ok(op.clone());
        }
        let op = up[a].multiply(&down[b])?;
        hop.insert((a, b), op.clone());
        Ok(op)
    };

    for p in 1..=f.n_orb {
        for q in 1..=f.n_orb {
            let v = f.h1(p, q);
            if v.abs() < COEFF_TOL {
                continue;
            }
            for s in 0..2 {
                let mut t = hopping(so(p, s), so(q, s))?;
                t.scale(Complex64::new(v, 0.0));
                h.add(&t);
            }
        }
    }
    // ½ (pr|qs) a†_pσ a†_qτ a_sτ a_rσ = ½ (pr|qs) (a†_pσ a_rσ a†_qτ a_sτ − δ a†_pσ a_sτ)
    // with δ = [qτ = rσ].
    for p in 1..=f.n_orb {
        for r in 1..=f.n_orb {
            for q in 1..=f.n_orb {
                for s in 1..=f.n_orb {
                    let v = 0.5 * f.g2(p, r, q, s);
                    if v.abs() < COEFF_TOL {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            let (pa, ra, qb, sb) = (so(p, sigma), so(r, sigma), so(q, tau), so(s, tau));
                            if pa == qb || ra == sb {
                                continue;
                            }
                            let mut t = hopping(pa, ra)?.multiply(&hopping(qb, sb)?)?;
                            if qb == ra {
                                let mut d = hopping(pa, sb)?;
                                d.scale(Complex64::new(-1.0, 0.0));
                                t.add(&d);
                            }
                            t.scale(Complex64::new(v, 0.0));
                            h.add(&t);
                        }
                    }
                }
            }
        }
    }
    h.prune(COEFF_TOL);
    let mut pauli = h.to_pauli_sum(1e-10)?;
    pauli.prune(COEFF_TOL);
    let id = PauliString::identity(n)?;
    let constant = pauli
        .terms()
        .find(|(_, s)| s.is_identity())
        .map(|(c, _)| c)
        .unwrap_or(0.0);
    if constant != 0.0 {
        pauli.add_term(-constant, id)?;
        pauli.prune(0.0);
    }
    Ok(MolecularHamiltonian {
        n_qubits: n,
        pauli,
        constant,
    })
}

/// Index of the reference determinant occupying the first `d` spin orbitals.
pub fn reference_index(d: usize) -> usize {
    (1usize << d) - 1
}

/// `⟨ref|H|ref⟩` from the diagonal (I/Z) terms only.
pub fn hf_energy(h: &MolecularHamiltonian, d: usize) -> Result<f64> {
    if d > h.n_qubits {
        return Err(Error::Params(format!("{d} electrons in {} spin orbitals", h.n_qubits)));
    }
    let r = reference_index(d) as u64;
    let mut e = h.constant;
    for (c, s) in h.pauli.terms() {
        e += c * f64::from(expectation_sign_table(&s, r)?);
    }
    Ok(e)
}

/// `H` restricted to the `d`-particle sector as sparse rows over the
/// lexicographic list of `d`-hot bitstrings.
pub struct SectorMatrix {
    pub basis: Vec<usize>,
    rows: Vec<Vec<(usize, Complex64)>>,
    diagonal_shift: f64,
}

impl SectorMatrix {
    pub fn new(h: &MolecularHamiltonian, d: usize) -> Result<Self> {
        if h.n_qubits > MAX_FCI_QUBITS {
            return Err(Error::TooLarge {
                what: "FCI diagonalization",
                limit: MAX_FCI_QUBITS,
                got: h.n_qubits,
            });
        }
        if d > h.n_qubits {
            return Err(Error::Params(format!("{d} electrons in {} spin orbitals", h.n_qubits)));
        }
        let basis: Vec<usize> = combinations(h.n_qubits, d)
            .into_iter()
            .map(|b| b.iter().map(|&q| 1usize << (q - 1)).sum())
            .collect();
        let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let terms: Vec<(usize, usize, Complex64)> = h
            .pauli
            .terms()
            .map(|(c, s)| {
                let ny = (s.x_mask() & s.z_mask()).count_ones() as u8;
                (s.x_mask() as usize, s.z_mask() as usize, i_pow(ny) * c)
            })
            .collect();
        // Column `i` of the Pauli term maps to row `i ^ x`; collect row-wise
        // through the Hermitian transpose.
        let mut rows = vec![Vec::new(); basis.len()];
        for (col, &i) in basis.iter().enumerate() {
            let mut acc: HashMap<usize, Complex64> = HashMap::new();
            for &(x, z, c) in &terms {
                let j = i ^ x;
                if let Some(&row) = pos.get(&j) {
                    let sign = if (i & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    *acc.entry(row).or_default() += c * sign;
                }
            }
            let mut entries: Vec<(usize, Complex64)> = acc.into_iter().filter(|(_, v)| v.norm() > 0.0).collect();
            entries.sort_by_key(|e| e.0);
            rows[col] = entries;
        }
        // rows[col] currently holds column `col`; H is Hermitian so row k is
        // the conjugate of column k.
        for r in rows.iter_mut() {
            r.iter_mut().for_each(|e| e.1 = e.1.conj());
        }
        Ok(Self {
            basis,
            rows,
            diagonal_shift: h.constant,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_iterator(
            self.dim(),
            self.rows.iter().enumerate().map(|(k, row)| {
                row.iter().map(|&(j, c)| c * v[j]).sum::<Complex64>()
                    + v[k] * self.diagonal_shift
            }),
        )
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (k, row) in self.rows.iter().enumerate() {
            for &(j, c) in row {
                m[(k, j)] += c;
            }
            m[(k, k)] += Complex64::new(self.diagonal_shift, 0.0);
        }
        m
    }
}

/// Lowest eigenvalue of a Hermitian operator given only its action, by
/// Lanczos with full reorthogonalization.
pub fn lanczos_ground(
    apply: impl Fn(&DVector<Complex64>) -> DVector<Complex64>,
    dim: usize,
    seed: u64,
    tol: f64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = DVector::from_fn(dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
    q /= Complex64::new(q.norm(), 0.0);
    let mut basis: Vec<DVector<Complex64>> = vec![q];
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut last = f64::INFINITY;
    loop {
        let k = basis.len() - 1;
        let mut w = apply(&basis[k]);
        alpha.push(basis[k].dotc(&w).re);
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let ground = SymmetricEigen::new(t).eigenvalues.min();
        let b = w.norm();
        if (ground - last).abs() < tol * (1.0 + ground.abs()) || b < 1e-12 || m == dim {
            return ground;
        }
        last = ground;
        beta.push(b);
        basis.push(w / Complex64::new(b, 0.0));
    }
}

/// Lowest eigenvalue in the `d`-particle sector.
pub fn fci_ground_energy(h: &MolecularHamiltonian, d: usize) -> Result<f64> {
    let sector = SectorMatrix::new(h, d)?;
    if sector.dim() <= DENSE_FCI_LIMIT {
        let eig = SymmetricEigen::new(sector.to_dense());
        return Ok(eig.eigenvalues.min());
    }
    Ok(lanczos_ground(|v| sector.apply(v), sector.dim(), 0, 1e-14))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    const H2: &str = include_str!("../data/h2_sto3g_1.4bohr.fcidump");

    fn header(norb: usize, nelec: usize) -> String {
        format!(" &FCI NORB={norb},NELEC={nelec},MS2=0,\n  ORBSYM=1,\n  ISYM=1,\n &END\n")
    }

    #[test]
    fn core_only() {
        let f = parse_fcidump(&(header(1, 0) + "0.5 0 0 0 0\n")).unwrap();
        assert_eq!(f.core_energy, 0.5);
        assert!(f.h1.iter().chain(&f.g2).all(|&v| v == 0.0));
    }

    #[test]
    fn one_body_symmetry() {
        let f = parse_fcidump(&(header(2, 2) + "0.25 1 2 0 0\n")).unwrap();
        assert_eq!(f.h1(1, 2), 0.25);
        assert_eq!(f.h1(2, 1), 0.25);
    }

    #[test]
    fn two_body_symmetry() {
        let f = parse_fcidump(&(header(3, 2) + "0.125 2 1 3 1\n")).unwrap();
        for (i, j, k, l) in [(2, 1, 3, 1), (1, 2, 3, 1), (2, 1, 1, 3), (1, 2, 1, 3), (3, 1, 2, 1), (1, 3, 2, 1), (3, 1, 1, 2), (1, 3, 1, 2)] {
            assert_eq!(f.g2(i, j, k, l), 0.125);
        }
        assert_eq!(f.g2(2, 3, 1, 1), 0.0);
    }

    #[test]
    fn parse_errors_are_distinct() {
        let kind = |t: &str| match parse_fcidump(t) {
            Err(Error::Fcidump(e)) => (e.line, e.kind),
            other => panic!("{other:?}"),
        };
        assert_eq!(kind("0.5 0 0 0 0\n").1, ParseErrorKind::MissingNamelist);
        assert_eq!(kind(" &FCI NORB=2,\n").1, ParseErrorKind::UnterminatedNamelist);
        assert_eq!(kind(" &FCI NORB=2,\n &END\n").1, ParseErrorKind::MissingKey("NELEC"));
        assert!(matches!(kind(" &FCI NORB=x,NELEC=2\n &END\n").1, ParseErrorKind::BadNamelistValue { key: "NORB", .. }));
        assert_eq!(kind(&(header(2, 2) + "abc 1 1 0 0\n")), (5, ParseErrorKind::NotNumeric("abc".into())));
        assert_eq!(kind(&(header(2, 2) + "0.1 1 3 0 0\n")), (5, ParseErrorKind::IndexOutOfRange { index: 3, n_orb: 2 }));
        assert_eq!(kind(&(header(2, 2) + "\n0.1 1 1 0\n")), (6, ParseErrorKind::FieldCount(4)));
        assert_eq!(kind(&(header(2, 2) + "0.1 0 1 0 0\n")).1, ParseErrorKind::BadIndexPattern([0, 1, 0, 0]));
    }

    #[test]
    fn fixture_header() {
        let f = parse_fcidump(H2).unwrap();
        assert_eq!((f.n_orb, f.n_elec, f.ms2), (2, 2, 0));
        assert_eq!(f.g2(1, 2, 1, 2), 0.1812579147931083);
    }

    #[test]
    fn serialization_is_idempotent() {
        let once = parse_fcidump(H2).unwrap().to_fcidump();
        let twice = parse_fcidump(&once).unwrap().to_fcidump();
        assert_eq!(once, twice);
        assert_eq!(parse_fcidump(&once).unwrap(), parse_fcidump(H2).unwrap());
    }

    fn single_orbital(eps: f64, core: f64) -> MolecularHamiltonian {
        let mut f = FciDump::new(1, 1);
        f.set_h1(1, 1, eps);
        f.core_energy = core;
        jw_hamiltonian(&f).unwrap()
    }

    #[test]
    fn one_body_map() {
        let h = single_orbital(-0.7, 0.3);
        assert!((h.constant - (0.3 - 0.7)).abs() < 1e-15);
        let mut want = PauliSum::new(2);
        want.add_term(0.35, "ZI".parse().unwrap()).unwrap();
        want.add_term(0.35, "IZ".parse().unwrap()).unwrap();
        assert_eq!(h.pauli, want);
    }

    #[test]
    fn number_operator_jw() {
        let op = ladder_op(0, 3, true).unwrap().multiply(&ladder_op(0, 3, false).unwrap()).unwrap();
        let mut s = op.to_pauli_sum(0.0).unwrap();
        s.prune(0.0);
        let mut want = PauliSum::new(3);
        want.add_term(0.5, PauliString::identity(3).unwrap()).unwrap();
        want.add_term(-0.5, "ZII".parse().unwrap()).unwrap();
        assert_eq!(s, want);
    }

    #[test]
    fn scaled_number_operator_energies() {
        let mut f = FciDump::new(3, 2);
        for p in 1..=3 {
            f.set_h1(p, p, -0.4);
        }
        f.core_energy = 1.25;
        let h = jw_hamiltonian(&f).unwrap();
        for d in 0..=6 {
            let want = d as f64 * -0.4 + 1.25;
            assert!((hf_energy(&h, d).unwrap() - want).abs() < 1e-12);
            assert!((fci_ground_energy(&h, d).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn z_only_hf_energy() {
        let mut pauli = PauliSum::new(4);
        pauli.add_term(0.5, "ZIII".parse().unwrap()).unwrap();
        pauli.add_term(-0.25, "IIZI".parse().unwrap()).unwrap();
        pauli.add_term(0.125, "ZZII".parse().unwrap()).unwrap();
        pauli.add_term(9.0, "XXII".parse().unwrap()).unwrap();
        let h = MolecularHamiltonian { n_qubits: 4, pauli, constant: 0.0 };
        assert!((hf_energy(&h, 2).unwrap() - (-0.5 - 0.25 + 0.125)).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_json_round_trip() {
        let h = jw_hamiltonian(&parse_fcidump(H2).unwrap()).unwrap();
        assert_eq!(MolecularHamiltonian::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn lanczos_matches_dense() {
        let h = jw_hamiltonian(&parse_fcidump(include_str!("../data/h4_sto3g_1.4bohr.fcidump")).unwrap()).unwrap();
        let sector = SectorMatrix::new(&h, 4).unwrap();
        let dense = SymmetricEigen::new(sector.to_dense()).eigenvalues.min();
        let lz = lanczos_ground(|v| sector.apply(v), sector.dim(), 3, 1e-14);
        assert!((dense - lz).abs() < 1e-10);
    }
}
