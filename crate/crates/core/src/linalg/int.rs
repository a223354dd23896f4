//! Integer matrices, Smith normal form over ℤ and over ℤ/eℤ, and lattices
//! that contain eℤⁿ.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged integer matrix");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn diag(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in integer product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> i64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(blocks: &[IntMatrix]) -> IntMatrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        IntMatrix { rows, cols, data }
    }

    /// Sum of squared entries; an upper bound for the squared operator norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Smith decomposition `U · A · V = D` over ℤ.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `D`, length `min(rows, cols)`; nonzero entries first, each
    /// dividing the next.
    pub diagonal: Vec<i64>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d != 0).count()
    }
}

type Work = Vec<Vec<i128>>;

fn to_work(a: &IntMatrix) -> Work {
    (0..a.rows()).map(|i| a.row(i).iter().map(|&x| x as i128).collect()).collect()
}

fn from_work(w: &Work, rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = i64::try_from(w[i][j]).expect("integer matrix entry overflow");
        }
    }
    m
}

fn identity_work(n: usize) -> Work {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Extended gcd with `g >= 0` and `x·a + y·b = g`.
pub(crate) fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Row combination `(r1, r2) <- (x r1 + y r2, p r1 + q r2)`.
fn combine_rows(w: &mut Work, r1: usize, r2: usize, x: i128, y: i128, p: i128, q: i128, modulus: Option<i128>) {
    for j in 0..w[r1].len() {
        let (a, b) = (w[r1][j], w[r2][j]);
        let (mut na, mut nb) = (x * a + y * b, p * a + q * b);
        if let Some(m) = modulus {
            na = na.rem_euclid(m);
            nb = nb.rem_euclid(m);
        }
        w[r1][j] = na;
        w[r2][j] = nb;
    }
}

fn combine_cols(w: &mut Work, c1: usize, c2: usize, x: i128, y: i128, p: i128, q: i128, modulus: Option<i128>) {
    for row in w.iter_mut() {
        let (a, b) = (row[c1], row[c2]);
        let (mut na, mut nb) = (x * a + y * b, p * a + q * b);
        if let Some(m) = modulus {
            na = na.rem_euclid(m);
            nb = nb.rem_euclid(m);
        }
        row[c1] = na;
        row[c2] = nb;
    }
}

/// Core diagonalization shared by the ℤ and ℤ/eℤ variants. Returns the
/// diagonal (unnormalized in the modular case) and the transforms.
fn diagonalize(a: &IntMatrix, modulus: Option<i128>) -> (Work, Work, Work) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = to_work(a);
    if let Some(m) = modulus {
        for row in w.iter_mut() {
            for x in row.iter_mut() {
                *x = x.rem_euclid(m);
            }
        }
    }
    let mut u = identity_work(rows);
    let mut v = identity_work(cols);
    let size = |x: i128| -> i128 {
        match modulus {
            // pivot quality in ℤ/eℤ is the gcd with e
            Some(m) => x.gcd(&m),
            None => x.abs(),
        }
    };
    let zero = |x: i128| -> bool {
        match modulus {
            Some(m) => x.rem_euclid(m) == 0,
            None => x == 0,
        }
    };

    for t in 0..rows.min(cols) {
        // pick the nonzero entry with smallest size
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !zero(w[i][j]) {
                    let s = size(w[i][j]);
                    if best.is_none_or(|(b, _, _)| s < b) {
                        best = Some((s, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        w.swap(t, pi);
        u.swap(t, pi);
        for row in w.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            let mut changed = false;
            // clear column t below the pivot
            for i in t + 1..rows {
                if zero(w[i][t]) {
                    continue;
                }
                let (a0, b0) = (w[t][t], w[i][t]);
                if !zero(a0) && b0 % a0 == 0 {
                    let q = b0 / a0;
                    combine_rows(&mut w, t, i, 1, 0, -q, 1, modulus);
                    combine_rows(&mut u, t, i, 1, 0, -q, 1, modulus);
                } else {
                    let (g, x, y) = ext_gcd(a0, b0);
                    let (p, q) = (-b0 / g, a0 / g);
                    combine_rows(&mut w, t, i, x, y, p, q, modulus);
                    combine_rows(&mut u, t, i, x, y, p, q, modulus);
                    changed = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if zero(w[t][j]) {
                    continue;
                }
                let (a0, b0) = (w[t][t], w[t][j]);
                if !zero(a0) && b0 % a0 == 0 {
                    let q = b0 / a0;
                    combine_cols(&mut w, t, j, 1, 0, -q, 1, modulus);
                    combine_cols(&mut v, t, j, 1, 0, -q, 1, modulus);
                } else {
                    let (g, x, y) = ext_gcd(a0, b0);
                    let (p, q) = (-b0 / g, a0 / g);
                    combine_cols(&mut w, t, j, x, y, p, q, modulus);
                    combine_cols(&mut v, t, j, x, y, p, q, modulus);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    (w, u, v)
}

/// Smith normal form over ℤ with transforms.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (rows, cols) = (a.rows(), a.cols());
    let (mut w, mut u, mut v) = diagonalize(a, None);
    let k = rows.min(cols);
    // make the diagonal nonnegative
    for t in 0..k {
        if w[t][t] < 0 {
            for x in w[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    // enforce the divisibility chain d_t | d_{t+1} on the nonzero prefix
    let nonzero = (0..k).take_while(|&t| w[t][t] != 0).count();
    let mut sorted = false;
    while !sorted {
        sorted = true;
        for t in 0..nonzero.saturating_sub(1) {
            let (a0, b0) = (w[t][t], w[t + 1][t + 1]);
            if b0 % a0 == 0 {
                continue;
            }
            sorted = false;
            // diag(a,b) ~ diag(g, ab/g): add row t+1 to row t, then reduce
            combine_rows(&mut w, t, t + 1, 1, 1, 0, 1, None);
            combine_rows(&mut u, t, t + 1, 1, 1, 0, 1, None);
            let (g, x, y) = ext_gcd(a0, b0);
            let (p, q) = (-b0 / g, a0 / g);
            combine_cols(&mut w, t, t + 1, x, y, p, q, None);
            combine_cols(&mut v, t, t + 1, x, y, p, q, None);
            // w[t] = (g, 0); w[t+1] = (b0*x, b0*a0/g); clear the lower-left entry
            let c = w[t + 1][t] / w[t][t];
            combine_rows(&mut w, t, t + 1, 1, 0, -c, 1, None);
            combine_rows(&mut u, t, t + 1, 1, 0, -c, 1, None);
            if w[t + 1][t + 1] < 0 {
                for x in w[t + 1].iter_mut() {
                    *x = -*x;
                }
                for x in u[t + 1].iter_mut() {
                    *x = -*x;
                }
            }
        }
    }
    Smith {
        diagonal: (0..k).map(|t| i64::try_from(w[t][t]).expect("smith entry overflow")).collect(),
        u: from_work(&u, rows, rows),
        v: from_work(&v, cols, cols),
    }
}

/// Invariant factors of the cokernel ℤʳᵒʷˢ / A·ℤᶜᵒˡˢ that differ from 1.
/// Free summands are reported as 0.
pub fn cokernel_invariants(a: &IntMatrix) -> Vec<i64> {
    let s = smith_normal_form(a);
    let mut out: Vec<i64> = s.diagonal.iter().copied().filter(|&d| d != 1).collect();
    out.extend(std::iter::repeat_n(0, a.rows().saturating_sub(s.diagonal.len())));
    out
}

/// Smith decomposition over ℤ/eℤ: `U·A·V ≡ D (mod e)` with `U`, `V`
/// invertible mod e.
#[derive(Clone, Debug)]
pub struct SmithMod {
    pub modulus: i64,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal entries reduced mod e, length `min(rows, cols)`.
    pub diagonal: Vec<i64>,
}

pub fn smith_mod(a: &IntMatrix, modulus: i64) -> SmithMod {
    assert!(modulus > 0, "modulus must be positive");
    let m = modulus as i128;
    let (w, u, v) = diagonalize(a, Some(m));
    let k = a.rows().min(a.cols());
    SmithMod {
        modulus,
        diagonal: (0..k).map(|t| w[t][t].rem_euclid(m) as i64).collect(),
        u: from_work(&u, a.rows(), a.rows()),
        v: from_work(&v, a.cols(), a.cols()),
    }
}

/// Generators of the kernel of `A : (ℤ/e)ᶜᵒˡˢ → (ℤ/e)ʳᵒʷˢ`.
pub fn kernel_mod(a: &IntMatrix, modulus: i64) -> Vec<Vec<i64>> {
    // same kernel as a triangular basis of the row span plus eℤᶜᵒˡˢ
    let reduced;
    let a = if a.rows() > a.cols() {
        let rows: Vec<Vec<i64>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
        reduced = IntMatrix::from_rows(&hnf_mod(&rows, a.cols(), modulus));
        &reduced
    } else {
        a
    };
    let s = smith_mod(a, modulus);
    let e = modulus;
    (0..a.cols())
        .filter_map(|j| {
            let d = s.diagonal.get(j).copied().unwrap_or(0);
            let factor = e / d.gcd(&e);
            if factor == e {
                return None;
            }
            Some(s.v.column(j).iter().map(|&x| (x * factor).rem_euclid(e)).collect())
        })
        .collect()
}

/// Solves `A x ≡ b (mod e)`; returns one solution when the system is
/// consistent.
pub fn solve_mod(a: &IntMatrix, b: &[i64], modulus: i64) -> Option<Vec<i64>> {
    assert_eq!(a.rows(), b.len());
    let e = modulus as i128;
    let s = smith_mod(a, modulus);
    let ub: Vec<i128> = (0..a.rows())
        .map(|i| {
            s.u.row(i)
                .iter()
                .zip(b)
                .map(|(&x, &y)| x as i128 * y as i128)
                .sum::<i128>()
                .rem_euclid(e)
        })
        .collect();
    let mut y = vec![0i128; a.cols()];
    for (i, &c) in ub.iter().enumerate() {
        let d = s.diagonal.get(i).copied().unwrap_or(0) as i128;
        let g = d.gcd(&e);
        if c % g != 0 {
            return None;
        }
        if i < a.cols() && d != 0 {
            let (dg, eg) = (d / g, e / g);
            let inv = mod_inverse(dg.rem_euclid(eg), eg).expect("reduced pivot is invertible");
            y[i] = ((c / g) * inv).rem_euclid(eg);
        }
    }
    Some(
        (0..a.cols())
            .map(|i| {
                (s.v.row(i).iter().zip(&y).map(|(&x, &yy)| x as i128 * yy).sum::<i128>()).rem_euclid(e)
                    as i64
            })
            .collect(),
    )
}

pub(crate) fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a, m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// Triangular basis of the lattice `span(gens) + eℤⁿ`. Vector `h[i]` vanishes
/// in coordinates `< i` and `h[i][i]` divides `e`. Entries stay in `[0, e)`.
pub fn hnf_mod(gens: &[Vec<i64>], n: usize, modulus: i64) -> Vec<Vec<i64>> {
    let e = modulus as i128;
    let mut pool: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| {
            assert_eq!(g.len(), n, "generator length mismatch");
            g.iter().map(|&x| (x as i128).rem_euclid(e)).collect()
        })
        .filter(|g: &Vec<i128>| g.iter().any(|&x| x != 0))
        .collect();
    let mut basis = Vec::with_capacity(n);
    for i in 0..n {
        let mut pivot = vec![0i128; n];
        pivot[i] = e;
        for g in pool.iter_mut() {
            if g[i] == 0 {
                continue;
            }
            let (a0, b0) = (pivot[i], g[i]);
            let (d, x, y) = ext_gcd(a0, b0);
            let (p, q) = (-b0 / d, a0 / d);
            for k in i..n {
                let (pa, gb) = (pivot[k], g[k]);
                pivot[k] = (x * pa + y * gb).rem_euclid(e);
                g[k] = (p * pa + q * gb).rem_euclid(e);
            }
            // a gcd equal to e reduces to 0 mod e
            if pivot[i] == 0 {
                pivot[i] = e;
            }
        }
        pool.retain(|g| g.iter().any(|&x| x != 0));
        basis.push(pivot.iter().map(|&x| x as i64).collect());
    }
    basis
}

/// Invariant factors (≠ 1) of `ℤⁿ / (span(gens) + eℤⁿ)`.
pub fn quotient_invariants_mod(gens: &[Vec<i64>], n: usize, modulus: i64) -> Vec<i64> {
    if n == 0 {
        return Vec::new();
    }
    let a = if gens.is_empty() {
        IntMatrix::zeros(n, 1)
    } else {
        IntMatrix::from_rows(gens).transpose()
    };
    let s = smith_mod(&a, modulus);
    let factors: Vec<i64> = (0..n)
        .map(|i| s.diagonal.get(i).copied().unwrap_or(0).gcd(&modulus))
        .collect();
    normalize_invariants(&factors)
}

/// Rewrites `⊕ ℤ/aᵢ` (aᵢ ≥ 1) in invariant-factor form `d₁ | d₂ | …`,
/// dropping trivial factors.
pub fn normalize_invariants(orders: &[i64]) -> Vec<i64> {
    let mut by_prime: std::collections::BTreeMap<i64, Vec<i64>> = Default::default();
    for &a in orders {
        assert!(a >= 1, "cyclic factor orders must be positive");
        for (p, pk) in prime_power_parts(a) {
            by_prime.entry(p).or_default().push(pk);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1i64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (k, pk) in powers.iter().enumerate() {
            // largest powers go into the largest invariant factor
            out[len - 1 - k] *= pk;
        }
    }
    out
}

fn prime_power_parts(mut a: i64) -> Vec<(i64, i64)> {
    let mut parts = Vec::new();
    let mut p = 2;
    while p * p <= a {
        if a % p == 0 {
            let mut pk = 1;
            while a % p == 0 {
                a /= p;
                pk *= p;
            }
            parts.push((p, pk));
        }
        p += 1;
    }
    if a > 1 {
        parts.push((a, a));
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IntMatrix) {
        let s = smith_normal_form(a);
        let d = s.u.mul(a).mul(&s.v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expected = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(d[(i, j)], expected, "U A V is not diagonal for {a:?}");
            }
        }
        assert_eq!(s.u.det().abs(), 1);
        assert_eq!(s.v.det().abs(), 1);
        let nz: Vec<i64> = s.diagonal.iter().copied().filter(|&x| x != 0).collect();
        for w in nz.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {:?}", s.diagonal);
        }
    }

    #[test]
    fn smith_small_examples() {
        check_smith(&IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]));
        check_smith(&IntMatrix::from_rows(&[[0, 1], [0, -2]]));
        check_smith(&IntMatrix::from_rows(&[[0, 0], [0, -2]]));
        check_smith(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        let s = smith_normal_form(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.diagonal, vec![1, 6]);
        let s = smith_normal_form(&IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]));
        assert_eq!(s.diagonal, vec![2, 6, 12]);
    }

    #[test]
    fn determinant() {
        assert_eq!(IntMatrix::from_rows(&[[1, 1], [0, -1]]).det(), -1);
        assert_eq!(IntMatrix::from_rows(&[[0, 2, 1], [1, 0, 0], [0, 1, 1]]).det(), -1);
        assert_eq!(IntMatrix::from_rows(&[[1, 2], [2, 4]]).det(), 0);
    }

    #[test]
    fn normalize_combines_prime_powers() {
        assert_eq!(normalize_invariants(&[2, 3]), vec![6]);
        assert_eq!(normalize_invariants(&[2, 4, 1]), vec![2, 4]);
        assert_eq!(normalize_invariants(&[6, 10]), vec![2, 30]);
        assert!(normalize_invariants(&[1, 1]).is_empty());
    }

    #[test]
    fn solve_and_kernel_mod() {
        // 2x ≡ 2 (mod 4): solutions x ∈ {1, 3}
        let a = IntMatrix::from_rows(&[[2]]);
        let x = solve_mod(&a, &[2], 4).unwrap();
        assert_eq!((2 * x[0]).rem_euclid(4), 2);
        assert!(solve_mod(&a, &[1], 4).is_none());
        let k = kernel_mod(&a, 4);
        assert_eq!(k, vec![vec![2]]);
    }

    #[test]
    fn hnf_mod_spans_lattice() {
        // ℤ² + ℤ(1/2,1/2) scaled by 2: span{(1,1)} + 2ℤ²
        let h = hnf_mod(&[vec![1, 1]], 2, 2);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(quotient_invariants_mod(&[vec![1, 1]], 2, 2), vec![2]);
    }

    proptest::proptest! {
        #[test]
        fn smith_transforms_are_exact(entries in proptest::collection::vec(-6i64..=6, 12)) {
            let a = IntMatrix::from_rows(&entries.chunks(4).collect::<Vec<_>>());
            check_smith(&a);
        }
    }
}
