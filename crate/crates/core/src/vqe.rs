//! Variational optimization of the L-wise correlated ansatz over orthonormal
//! `G` matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::chem::{fci_ground_energy, hf_energy, MolecularHamiltonian};
use crate::loader::{prepare_state_circuit, LadderStyle};
use crate::ortho::OrthonormalMatrix;
use crate::sim::{self, StateVector};
use crate::{Error, Result};

pub const FD_STEP: f64 = 1e-5;
pub const LBFGS_MEMORY: usize = 10;

/// Angles of the Givens rotations `(l, j)`, `1 ≤ l ≤ d′ < j ≤ n′`, ordered
/// by `l` then `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StiefelParams {
    pub n: usize,
    pub d: usize,
    pub angles: Vec<f64>,
}

pub fn stiefel_dim(n: usize, d: usize) -> usize {
    d * n - d * (d + 1) / 2
}

impl StiefelParams {
    pub fn new(n: usize, d: usize, angles: Vec<f64>) -> Result<Self> {
        if d > n {
            return Err(Error::Dimension(format!("{d} columns in {n} rows")));
        }
        if angles.len() != stiefel_dim(n, d) {
            return Err(Error::Params(format!(
                "{}×{d} needs {} angles, got {}",
                n,
                stiefel_dim(n, d),
                angles.len()
            )));
        }
        Ok(Self { n, d, angles })
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, vec![0.0; stiefel_dim(n, d)])
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let (n, d) = (self.n, self.d);
        (1..=d).flat_map(move |l| (l + 1..=n).map(move |j| (l, j)))
    }
}

/// `G⁽¹⁾ ⋯ G⁽ᵈ′⁾ · I[:, :d′]` with `G⁽ˡ⁾ = Π_{j>l} G(l, j, α)` and
/// `G(l, j, α): (v_l, v_j) ↦ (cos α v_l − sin α v_j, sin α v_l + cos α v_j)`.
pub fn params_to_matrix(p: &StiefelParams) -> Result<OrthonormalMatrix> {
    StiefelParams::new(p.n, p.d, p.angles.clone())?;
    let (n, d) = (p.n, p.d);
    let mut cols: Vec<Vec<f64>> = (0..d)
        .map(|c| (0..n).map(|r| if r == c { 1.0 } else { 0.0 }).collect())
        .collect();
    let rotations: Vec<((usize, usize), f64)> = p.pairs().zip(p.angles.iter().copied()).collect();
    // Rightmost factor acts first.
    for &((l, j), a) in rotations.iter().rev() {
        let (s, c) = a.sin_cos();
        for col in cols.iter_mut() {
            let (vl, vj) = (col[l - 1], col[j - 1]);
            col[l - 1] = c * vl - s * vj;
            col[j - 1] = s * vl + c * vj;
        }
    }
    OrthonormalMatrix::from_columns(&cols)
}

/// Prepared ansatz state for the given parameters.
pub fn ansatz_state(p: &StiefelParams, l: usize, style: LadderStyle) -> Result<StateVector> {
    let g = params_to_matrix(p)?;
    sim::run(&prepare_state_circuit(&g, l, style, false)?, None)
}

pub fn objective(p: &StiefelParams, h: &MolecularHamiltonian, l: usize, style: LadderStyle) -> Result<f64> {
    if p.n * l != h.n_qubits {
        return Err(Error::Dimension(format!(
            "{} modes with L = {l} on a {}-qubit Hamiltonian",
            p.n, h.n_qubits
        )));
    }
    h.energy(&ansatz_state(p, l, style)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub energy: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Starting point, then one row per accepted step.
    pub trace: Vec<TraceRow>,
}

/// Central-difference gradient, probes evaluated in parallel.
pub fn fd_gradient<F>(f: &F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    (0..x.len())
        .into_par_iter()
        .map(|i| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            Ok((f(&xp)? - f(&xm)?) / (2.0 * h))
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn axpy(x: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + t * b).collect()
}

struct Point {
    t: f64,
    f: f64,
    g: Vec<f64>,
    slope: f64,
}

/// Strong-Wolfe line search by bracketing and bisection-safeguarded zoom.
/// Returns `None` when no acceptable step was found.
fn wolfe_search<F>(f: &F, x: &[f64], fx: f64, gx: &[f64], d: &[f64], t0: f64) -> Result<Option<Point>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    const C1: f64 = 1e-4;
    const C2: f64 = 0.9;
    let slope0 = dot(gx, d);
    let eval = |t: f64| -> Result<Point> {
        let xt = axpy(x, t, d);
        let ft = f(&xt)?;
        let g = fd_gradient(f, &xt, FD_STEP)?;
        let slope = dot(&g, d);
        Ok(Point { t, f: ft, g, slope })
    };
    let zoom = |mut lo: Point, mut hi: Point| -> Result<Option<Point>> {
        for _ in 0..30 {
            // Quadratic interpolation from lo's value and slope, kept inside
            // the middle of the bracket.
            let (a, b) = (lo.t.min(hi.t), lo.t.max(hi.t));
            let denom = 2.0 * (hi.f - lo.f - lo.slope * (hi.t - lo.t));
            let mut t = if denom.abs() > 0.0 {
                lo.t - lo.slope * (hi.t - lo.t).powi(2) / denom
            } else {
                0.5 * (a + b)
            };
            let margin = 0.1 * (b - a);
            if !t.is_finite() || t < a + margin || t > b - margin {
                t = 0.5 * (a + b);
            }
            if (b - a) < 1e-14 * (1.0 + b) {
                break;
            }
            let p = eval(t)?;
            if p.f > fx + C1 * t * slope0 || p.f >= lo.f {
                hi = p;
            } else {
                if p.slope.abs() <= -C2 * slope0 {
                    return Ok(Some(p));
                }
                if p.slope * (hi.t - lo.t) >= 0.0 {
                    hi = lo;
                }
                lo = p;
            }
        }
        // Fall back on the best sufficient-decrease point found.
        Ok((lo.t > 0.0 && lo.f < fx).then_some(lo))
    };
    let mut prev = Point {
        t: 0.0,
        f: fx,
        g: gx.to_vec(),
        slope: slope0,
    };
    let mut t = t0;
    for i in 0..20 {
        let p = eval(t)?;
        if p.f > fx + C1 * t * slope0 || (i > 0 && p.f >= prev.f) {
            return zoom(prev, p);
        }
        if p.slope.abs() <= -C2 * slope0 {
            return Ok(Some(p));
        }
        if p.slope >= 0.0 {
            return zoom(p, prev);
        }
        prev = p;
        t *= 2.0;
    }
    Ok((prev.t > 0.0).then_some(prev))
}

/// L-BFGS (two-loop recursion, memory [`LBFGS_MEMORY`]) with
/// finite-difference gradients. Stops when the gradient ∞-norm drops below
/// `tol` or an accepted step changes the value by less than `tol·(1+|f|)`.
pub fn minimize<F>(f: F, x0: &[f64], tol: f64, max_iter: usize) -> Result<Minimum>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::Params(format!("tolerance must be positive, got {tol}")));
    }
    let mut x = x0.to_vec();
    let mut fx = f(&x)?;
    let mut g = fd_gradient(&f, &x, FD_STEP)?;
    let mut trace = vec![TraceRow {
        iter: 0,
        energy: fx,
        grad_norm: inf_norm(&g),
    }];
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut converged = x.is_empty();
    let mut iterations = 0;
    while !converged && iterations < max_iter {
        if inf_norm(&g) < tol {
            converged = true;
            break;
        }
        // Two-loop recursion for d = −H g.
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(memory.len());
        for (s, y, rho) in memory.iter().rev() {
            let a = rho * dot(s, &q);
            q = axpy(&q, -a, y);
            alphas.push(a);
        }
        if let Some((s, y, _)) = memory.back() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|v| *v *= gamma);
        }
        for ((s, y, rho), a) in memory.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            q = axpy(&q, a - b, s);
        }
        let mut d: Vec<f64> = q.iter().map(|v| -v).collect();
        if dot(&d, &g) >= 0.0 {
            memory.clear();
            d = g.iter().map(|v| -v).collect();
        }
        let t0 = if memory.is_empty() { (1.0 / inf_norm(&g)).min(1.0) } else { 1.0 };
        let step = match wolfe_search(&f, &x, fx, &g, &d, t0)? {
            Some(p) => p,
            None if !memory.is_empty() => {
                memory.clear();
                continue;
            }
            None => break,
        };
        iterations += 1;
        let x_new = axpy(&x, step.t, &d);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = step.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if memory.len() == LBFGS_MEMORY {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }
        let change = fx - step.f;
        x = x_new;
        fx = step.f;
        g = step.g;
        trace.push(TraceRow {
            iter: iterations,
            energy: fx,
            grad_norm: inf_norm(&g),
        });
        if inf_norm(&g) < tol || change.abs() < tol * (1.0 + fx.abs()) {
            converged = true;
        }
    }
    Ok(Minimum {
        x,
        value: fx,
        iterations,
        converged,
        trace,
    })
}

/// `(E_HF − E_opt) / (E_HF − E_FCI)`, `None` when the correlation energy is
/// below 1e-12.
pub fn correlation_fraction(e_hf: f64, e_opt: f64, e_fci: f64) -> Option<f64> {
    let denom = e_hf - e_fci;
    (denom.abs() >= 1e-12).then(|| (e_hf - e_opt) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VqeOptions {
    pub l: usize,
    pub style: LadderStyle,
    pub tol: f64,
    pub max_iter: usize,
    /// Seeded uniform perturbation of ±1e-2 rad on the zero start.
    pub perturb_seed: Option<u64>,
}

impl Default for VqeOptions {
    fn default() -> Self {
        Self {
            l: 2,
            style: LadderStyle::LogTree,
            tol: 1e-9,
            max_iter: 200,
            perturb_seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub energy: f64,
    pub params: StiefelParams,
    pub e_hf: f64,
    pub e_fci: f64,
    pub e_pair: f64,
    pub fraction: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

impl VqeResult {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iter,energy,grad_norm\n");
        for r in &self.trace {
            out.push_str(&format!("{},{:.15e},{:.6e}\n", r.iter, r.energy, r.grad_norm));
        }
        out
    }
}

/// Optimize the L-wise ansatz for `d` electrons, starting from the HF
/// reference.
pub fn run_vqe(h: &MolecularHamiltonian, d: usize, opts: &VqeOptions) -> Result<VqeResult> {
    let l = opts.l;
    if l == 0 || h.n_qubits % l != 0 || d % l != 0 {
        return Err(Error::Dimension(format!(
            "L = {l} must divide both {} qubits and {d} electrons",
            h.n_qubits
        )));
    }
    let (n, dd) = (h.n_qubits / l, d / l);
    let mut x0 = vec![0.0; stiefel_dim(n, dd)];
    if let Some(seed) = opts.perturb_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        x0.iter_mut().for_each(|v| *v = rng.gen_range(-1e-2..1e-2));
    }
    let f = |x: &[f64]| objective(&StiefelParams::new(n, dd, x.to_vec())?, h, l, opts.style);
    let m = minimize(f, &x0, opts.tol, opts.max_iter)?;
    let e_hf = hf_energy(h, d)?;
    let e_fci = fci_ground_energy(h, d)?;
    Ok(VqeResult {
        energy: m.value,
        params: StiefelParams::new(n, dd, m.x)?,
        e_hf,
        e_fci,
        e_pair: e_hf - m.value,
        fraction: correlation_fraction(e_hf, m.value, e_fci),
        iterations: m.iterations,
        converged: m.converged,
        trace: m.trace,
    })
}
