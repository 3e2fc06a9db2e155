//! Real linear algebra for the loaders: orthonormal column matrices, the
//! binary-tree Givens schedule that reduces a unit vector to `e₁`, and
//! determinants of square minors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::{Error, Result};

/// Entrywise tolerance on `MᵀM = I`.
pub const ORTHO_TOL: f64 = 1e-12;
/// Tolerance on `‖x‖₂ = 1` for loader inputs.
pub const NORM_TOL: f64 = 1e-12;

/// A real `rows × cols` matrix with orthonormal columns, stored row-major.
///
/// Serializes as `{"rows": N, "cols": d, "data": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthonormalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl<'de> Deserialize<'de> for OrthonormalMatrix {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = RawMatrix::deserialize(deserializer)?;
        OrthonormalMatrix::new(raw.rows, raw.cols, raw.data).map_err(serde::de::Error::custom)
    }
}

impl OrthonormalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("{rows}×{cols} matrix must be non-empty")));
        }
        if cols > rows {
            return Err(Error::Dimension(format!(
                "{rows}×{cols} matrix has more columns than rows"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}×{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Dimension("matrix has non-finite entries".into()));
        }
        let m = Self { rows, cols, data };
        let dev = m.orthonormality_error();
        if dev > ORTHO_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(m)
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns have different lengths".into()));
        }
        let mut data = vec![0.0; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                data[i * cols + j] = *v;
            }
        }
        Self::new(rows, cols, data)
    }

    /// The first `cols` columns of the `rows × rows` identity.
    pub fn identity_columns(rows: usize, cols: usize) -> Result<Self> {
        let mut data = vec![0.0; rows * cols];
        for j in 0..cols.min(rows) {
            data[j * cols + j] = 1.0;
        }
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Zero-based entry access.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    /// Largest entry of `|MᵀM − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.cols {
            for b in a..self.cols {
                let dot: f64 = (0..self.rows).map(|r| self.get(r, a) * self.get(r, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Deterministic orthonormal test matrix: modified Gram–Schmidt (two passes)
/// on a seeded uniform matrix.
pub fn random_orthonormal(rows: usize, cols: usize, seed: u64) -> Result<OrthonormalMatrix> {
    if cols > rows {
        return Err(Error::Dimension(format!(
            "{rows}×{cols} matrix has more columns than rows"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<f64> = (0..rows).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for c in &columns {
                let dot: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|a| *a /= norm);
        columns.push(v);
    }
    OrthonormalMatrix::from_columns(&columns)
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: usize) -> usize {
    debug_assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Pairs `(μ, ν)` (1-based) of each binary-tree sublayer `s = 1..⌈log₂ n⌉`:
/// `μ = 2^s(k−1)+1`, `ν = 2^{s−1}(2k−1)+1`, keeping only `ν ≤ n`.
pub fn tree_index_sets(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n <= 1 {
        return Vec::new();
    }
    (1..=ceil_log2(n))
        .map(|s| {
            let step = 1usize << s;
            let half = step / 2;
            (0..)
                .map(|k| (step * k + 1, step * k + half + 1))
                .take_while(|&(_, nu)| nu <= n)
                .collect()
        })
        .collect()
}

/// One Givens rotation of a schedule; indices are 1-based logical modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub mu: usize,
    pub nu: usize,
    pub theta: f64,
}

/// Rotation angles for the binary tree, sublayer by sublayer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GivensSchedule {
    pub n: usize,
    pub layers: Vec<Vec<Rotation>>,
}

impl GivensSchedule {
    /// Apply the classical zeroing map of every rotation, sublayer 1 first:
    /// `(x_μ, x_ν) ← (cos2θ·x_μ + sin2θ·x_ν, −sin2θ·x_μ + cos2θ·x_ν)`.
    pub fn replay(&self, x: &[f64]) -> Vec<f64> {
        let mut v = x.to_vec();
        for rot in self.layers.iter().flatten() {
            apply_zeroing(&mut v, rot);
        }
        v
    }

    pub fn rotations(&self) -> impl Iterator<Item = &Rotation> {
        self.layers.iter().flatten()
    }
}

fn apply_zeroing(v: &mut [f64], rot: &Rotation) {
    let (s, c) = (2.0 * rot.theta).sin_cos();
    let (a, b) = (v[rot.mu - 1], v[rot.nu - 1]);
    v[rot.mu - 1] = c * a + s * b;
    v[rot.nu - 1] = -s * a + c * b;
}

/// Half of the angle that rotates `(a, b)` onto the first axis, folded into
/// `(−π/4, π/4]`. The fold keeps the sign of `a`, so the surviving component
/// can come out negative.
fn half_angle(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        if b == 0.0 {
            0.0
        } else {
            FRAC_PI_4
        }
    } else {
        0.5 * (b / a).atan()
    }
}

/// Angles of the unary loader for the unit vector `x`. Replaying the
/// schedule maps `x` to `+e₁`; when the folded angles would leave `−e₁`, the
/// root rotation gets an extra `π/2`, which flips the sign of both of its
/// outputs.
pub fn compute_angles(x: &[f64]) -> Result<GivensSchedule> {
    let n = x.len();
    if n == 0 {
        return Err(Error::Dimension("empty vector".into()));
    }
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let mut v = x.to_vec();
    let mut layers = Vec::new();
    for pairs in tree_index_sets(n) {
        let layer: Vec<Rotation> = pairs
            .into_iter()
            .map(|(mu, nu)| {
                let rot = Rotation {
                    mu,
                    nu,
                    theta: half_angle(v[mu - 1], v[nu - 1]),
                };
                apply_zeroing(&mut v, &rot);
                rot
            })
            .collect();
        layers.push(layer);
    }
    if v[0] < 0.0 {
        if let Some(root) = layers.last_mut().and_then(|l| l.first_mut()) {
            root.theta += FRAC_PI_2;
        }
    }
    Ok(GivensSchedule { n, layers })
}

/// Determinant of the square minor of `m` keeping the rows in `rows`
/// (strictly increasing, 1-based).
pub fn minor_determinant(m: &OrthonormalMatrix, rows: &[usize]) -> Result<f64> {
    let k = m.cols();
    if rows.len() != k {
        return Err(Error::IndexSet(format!(
            "need {k} row indices, got {}",
            rows.len()
        )));
    }
    if rows.iter().any(|&r| r == 0 || r > m.rows()) {
        return Err(Error::IndexSet(format!(
            "row indices {rows:?} outside 1..={}",
            m.rows()
        )));
    }
    if rows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::IndexSet(format!(
            "row indices {rows:?} are not strictly increasing"
        )));
    }
    let minor: Vec<f64> = rows
        .iter()
        .flat_map(|&r| (0..k).map(move |c| (r, c)))
        .map(|(r, c)| m.get(r - 1, c))
        .collect();
    Ok(determinant(&minor, k))
}

/// Determinant of a row-major `k × k` matrix: Leibniz expansion up to
/// `k = 4`, partial-pivot elimination above.
pub fn determinant(a: &[f64], k: usize) -> f64 {
    if k <= 4 {
        leibniz_determinant(a, k)
    } else {
        lu_determinant(a, k)
    }
}

pub fn leibniz_determinant(a: &[f64], k: usize) -> f64 {
    assert_eq!(a.len(), k * k);
    let mut perm: Vec<usize> = (0..k).collect();
    let mut total = 0.0;
    permutations(&mut perm, 0, 1.0, &mut |p, sign| {
        total += sign * p.iter().enumerate().map(|(r, &c)| a[r * k + c]).product::<f64>();
    });
    total
}

fn permutations(p: &mut [usize], start: usize, sign: f64, f: &mut impl FnMut(&[usize], f64)) {
    if start + 1 >= p.len() {
        f(p, sign);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        let s = if i == start { sign } else { -sign };
        permutations(p, start + 1, s, f);
        p.swap(start, i);
    }
}

pub fn lu_determinant(a: &[f64], k: usize) -> f64 {
    assert_eq!(a.len(), k * k);
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| m[i * k + col].abs().total_cmp(&m[j * k + col].abs()))
            .unwrap();
        if m[pivot * k + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for c in 0..k {
                m.swap(pivot * k + c, col * k + c);
            }
            det = -det;
        }
        let p = m[col * k + col];
        det *= p;
        for r in col + 1..k {
            let f = m[r * k + col] / p;
            if f != 0.0 {
                for c in col..k {
                    m[r * k + c] -= f * m[col * k + c];
                }
            }
        }
    }
    det
}

/// All strictly increasing `k`-subsets of `1..=n`, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_8;

    #[test]
    fn tree_sets_small() {
        assert_eq!(tree_index_sets(4), vec![vec![(1, 2), (3, 4)], vec![(1, 3)]]);
        assert!(tree_index_sets(1).is_empty());
        assert_eq!(
            tree_index_sets(6),
            vec![vec![(1, 2), (3, 4), (5, 6)], vec![(1, 3)], vec![(1, 5)]]
        );
    }

    #[test]
    fn tree_sets_layer_count_and_disjoint() {
        for n in 1..=70 {
            let sets = tree_index_sets(n);
            assert_eq!(sets.len(), if n == 1 { 0 } else { ceil_log2(n) });
            for layer in &sets {
                let mut seen = std::collections::HashSet::new();
                for &(mu, nu) in layer {
                    assert!(mu < nu && nu <= n);
                    assert!(seen.insert(mu) && seen.insert(nu));
                }
            }
        }
    }

    #[test]
    fn angles_examples() {
        let s = compute_angles(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(s.rotations().all(|r| r.theta == 0.0));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = compute_angles(&[h, h]).unwrap();
        assert!((s.layers[0][0].theta - FRAC_PI_8).abs() < 1e-15);

        let s = compute_angles(&[0.5; 4]).unwrap();
        for r in s.rotations() {
            assert!((r.theta - FRAC_PI_8).abs() < 1e-15);
        }
        let e = s.replay(&[0.5; 4]);
        assert!((e[0] - 1.0).abs() < 1e-12 && e[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn angles_zero_denominator() {
        let s = compute_angles(&[0.0, 1.0]).unwrap();
        assert_eq!(s.layers[0][0].theta, FRAC_PI_4);
        let e = s.replay(&[0.0, 1.0]);
        assert!((e[0] - 1.0).abs() < 1e-15 && e[1].abs() < 1e-15);
    }

    #[test]
    fn root_sign_fixup() {
        let x = [-0.6, 0.8];
        let s = compute_angles(&x).unwrap();
        assert!(s.layers[0][0].theta > FRAC_PI_4);
        let e = s.replay(&x);
        assert!((e[0] - 1.0).abs() < 1e-14 && e[1].abs() < 1e-14);

        // non-root angles stay folded
        let x = [-0.5, 0.5, -0.5, -0.5];
        let s = compute_angles(&x).unwrap();
        for r in &s.layers[0] {
            assert!(r.theta > -FRAC_PI_4 && r.theta <= FRAC_PI_4);
        }
        let e = s.replay(&x);
        assert!((e[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(compute_angles(&[1.0, 1.0]), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn replay_seeded_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(2..=16);
            let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            x.iter_mut().for_each(|a| *a /= norm);
            let e = compute_angles(&x).unwrap().replay(&x);
            let resid = (e[0] - 1.0)
                .abs()
                .max(e[1..].iter().fold(0.0f64, |m, v| m.max(v.abs())));
            assert!(resid < 1e-10, "n={n} resid={resid}");
        }
    }

    #[test]
    fn minors_identity() {
        let m = OrthonormalMatrix::identity_columns(5, 3).unwrap();
        assert_eq!(minor_determinant(&m, &[1, 2, 3]).unwrap(), 1.0);
        assert_eq!(minor_determinant(&m, &[1, 2, 4]).unwrap(), 0.0);
        assert_eq!(minor_determinant(&m, &[2, 3, 5]).unwrap(), 0.0);
    }

    #[test]
    fn minor_two_by_two_closed_form() {
        let m = random_orthonormal(4, 2, 3).unwrap();
        let direct = m.get(1, 0) * m.get(2, 1) - m.get(1, 1) * m.get(2, 0);
        assert!((minor_determinant(&m, &[2, 3]).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn minor_rejects_bad_sets() {
        let m = random_orthonormal(4, 2, 0).unwrap();
        assert!(minor_determinant(&m, &[2, 1]).is_err());
        assert!(minor_determinant(&m, &[1, 5]).is_err());
        assert!(minor_determinant(&m, &[0, 1]).is_err());
        assert!(minor_determinant(&m, &[1]).is_err());
    }

    #[test]
    fn leibniz_matches_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 1..=4 {
            for _ in 0..50 {
                let a: Vec<f64> = (0..k * k).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let (l, u) = (leibniz_determinant(&a, k), lu_determinant(&a, k));
                assert!((l - u).abs() < 1e-12 * (1.0 + l.abs()));
            }
        }
    }

    #[test]
    fn squared_minors_sum_to_one() {
        for n in 1..=10 {
            for d in 1..=n {
                let m = random_orthonormal(n, d, (n * 31 + d) as u64).unwrap();
                let total: f64 = combinations(n, d)
                    .iter()
                    .map(|b| minor_determinant(&m, b).unwrap().powi(2))
                    .sum();
                assert!((total - 1.0).abs() < 1e-10, "n={n} d={d} total={total}");
            }
        }
    }

    #[test]
    fn random_orthonormal_properties() {
        let m = random_orthonormal(4, 2, 0).unwrap();
        assert!(m.orthonormality_error() < 1e-12);
        let q = random_orthonormal(3, 3, 99).unwrap();
        let det = lu_determinant(q.data(), 3);
        assert!((det.abs() - 1.0).abs() < 1e-10);
        assert_eq!(random_orthonormal(6, 3, 5).unwrap(), random_orthonormal(6, 3, 5).unwrap());
        assert!(random_orthonormal(2, 3, 0).is_err());
    }

    #[test]
    fn json_shape() {
        let m = OrthonormalMatrix::identity_columns(2, 1).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":1,"data":[1.0,0.0]}"#);
        let back: OrthonormalMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<OrthonormalMatrix>(r#"{"rows":2,"cols":1,"data":[1.0,1.0]}"#).is_err());
    }
}
