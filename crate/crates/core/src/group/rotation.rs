//! SO(3) as 3×3 rotation matrices and SU(2) as unit quaternions, with the
//! closed-form exponential maps, exponential-coordinate grids and the finite
//! rotation groups.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A rotation matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rotation(pub [f64; 9]);

impl Rotation {
    pub const IDENTITY: Rotation = Rotation([1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);

    /// Rodrigues formula: rotation by `|v|` about `v/|v|`.
    pub fn exp(v: [f64; 3]) -> Rotation {
        let theta = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let (a, b) = if theta < 1e-8 {
            (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
        } else {
            (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
        };
        let [x, y, z] = v;
        // I + a K + b K², K the cross-product matrix of v
        Rotation([
            1.0 - b * (y * y + z * z),
            -a * z + b * x * y,
            a * y + b * x * z,
            a * z + b * x * y,
            1.0 - b * (x * x + z * z),
            -a * x + b * y * z,
            -a * y + b * x * z,
            a * x + b * y * z,
            1.0 - b * (x * x + y * y),
        ])
    }

    pub fn about_axis(axis: [f64; 3], angle: f64) -> Rotation {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        Rotation::exp([axis[0] / n * angle, axis[1] / n * angle, axis[2] / n * angle])
    }

    pub fn mul(&self, o: &Rotation) -> Rotation {
        let (a, b) = (&self.0, &o.0);
        let mut c = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                c[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
            }
        }
        Rotation(c)
    }

    pub fn transpose(&self) -> Rotation {
        let a = &self.0;
        Rotation([a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]])
    }

    /// Frobenius distance `‖A − B‖_F`.
    pub fn distance(&self, o: &Rotation) -> f64 {
        self.0.iter().zip(&o.0).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }

    /// `tr(AᵀB)`; `‖A − B‖²_F = 6 − 2 tr(AᵀB)` for rotations.
    pub fn trace_inner(&self, o: &Rotation) -> f64 {
        self.0.iter().zip(&o.0).map(|(x, y)| x * y).sum()
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let tr = self.0[0] + self.0[4] + self.0[8];
        ((tr - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    }

    /// Unit quaternion with nonnegative scalar part (one of the two lifts).
    pub fn to_quat(&self) -> Quat {
        let m = &self.0;
        let tr = m[0] + m[4] + m[8];
        let q = if tr > 0.0 {
            let s = (tr + 1.0).sqrt() * 2.0;
            [0.25 * s, (m[7] - m[5]) / s, (m[2] - m[6]) / s, (m[3] - m[1]) / s]
        } else if m[0] > m[4] && m[0] > m[8] {
            let s = (1.0 + m[0] - m[4] - m[8]).sqrt() * 2.0;
            [(m[7] - m[5]) / s, 0.25 * s, (m[1] + m[3]) / s, (m[2] + m[6]) / s]
        } else if m[4] > m[8] {
            let s = (1.0 + m[4] - m[0] - m[8]).sqrt() * 2.0;
            [(m[2] - m[6]) / s, (m[1] + m[3]) / s, 0.25 * s, (m[5] + m[7]) / s]
        } else {
            let s = (1.0 + m[8] - m[0] - m[4]).sqrt() * 2.0;
            [(m[3] - m[1]) / s, (m[2] + m[6]) / s, (m[5] + m[7]) / s, 0.25 * s]
        };
        let q = Quat(q).normalized();
        if q.0[0] < 0.0 {
            q.neg()
        } else {
            q
        }
    }
}

/// A unit quaternion `w + xi + yj + zk`, standing for the SU(2) matrix
/// `[[w + xi, y + zi], [−y + zi, w − xi]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quat(pub [f64; 4]);

impl Quat {
    pub const IDENTITY: Quat = Quat([1.0, 0.0, 0.0, 0.0]);

    /// Exponential in the basis `X_k = −(i/2)σ_k`, whose structure constants
    /// are `[X_i, X_j] = ε_ijk X_k`. Covers the double cover of
    /// `Rotation::exp`.
    pub fn exp(v: [f64; 3]) -> Quat {
        let theta = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let half = theta / 2.0;
        let s = if theta < 1e-8 { 0.5 - theta * theta / 48.0 } else { half.sin() / theta };
        Quat([half.cos(), s * v[0], s * v[1], s * v[2]])
    }

    pub fn mul(&self, o: &Quat) -> Quat {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        Quat([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }

    pub fn conj(&self) -> Quat {
        let [w, x, y, z] = self.0;
        Quat([w, -x, -y, -z])
    }

    pub fn neg(&self) -> Quat {
        let [w, x, y, z] = self.0;
        Quat([-w, -x, -y, -z])
    }

    pub fn normalized(&self) -> Quat {
        let n = self.0.iter().map(|x| x * x).sum::<f64>().sqrt();
        Quat(self.0.map(|x| x / n))
    }

    pub fn chord(&self, o: &Quat) -> f64 {
        self.0.iter().zip(&o.0).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }

    /// Frobenius distance of the SU(2) matrices: `√2 · |q₁ − q₂|`.
    pub fn distance(&self, o: &Quat) -> f64 {
        std::f64::consts::SQRT_2 * self.chord(o)
    }

    /// The covering map SU(2) → SO(3).
    pub fn to_rotation(&self) -> Rotation {
        let [w, x, y, z] = self.0;
        Rotation([
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ])
    }
}

/// Which compact rotation group an exponential grid parametrizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationKind {
    So3,
    Su2,
}

impl RotationKind {
    /// Radius of the exponential-coordinate ball whose image is the whole
    /// group.
    pub fn covering_radius(self) -> f64 {
        match self {
            RotationKind::So3 => PI,
            RotationKind::Su2 => 2.0 * PI,
        }
    }

    /// Upper bound on `d_F(exp u, exp v) / |u − v|`. exp is 1-Lipschitz into
    /// the bi-invariant Riemannian metric (nonnegative curvature); the
    /// Frobenius distance is at most √2 (SO(3)) or 1/√2 (SU(2)) times it.
    pub fn chart_lipschitz(self) -> f64 {
        match self {
            RotationKind::So3 => std::f64::consts::SQRT_2,
            RotationKind::Su2 => std::f64::consts::FRAC_1_SQRT_2,
        }
    }
}

/// Cubic grid `h·ℤ³` restricted to a ball in exponential coordinates.
#[derive(Clone, Copy, Debug)]
pub struct ExpGrid {
    pub kind: RotationKind,
    pub spacing: f64,
    pub radius: f64,
    half_width: i64,
}

impl ExpGrid {
    pub fn new(kind: RotationKind, spacing: f64, radius: f64) -> Self {
        assert!(spacing > 0.0 && radius >= 0.0);
        let half_width = (radius / spacing).floor() as i64;
        Self { kind, spacing, radius, half_width }
    }

    /// Grid whose image is an ε-net of the whole group with certified mesh
    /// `Self::mesh()`. The ball is padded by the cell half-diagonal so that
    /// every point of the covering ball has a grid point within it.
    pub fn covering(kind: RotationKind, spacing: f64) -> Self {
        Self::new(kind, spacing, kind.covering_radius() + spacing * 3f64.sqrt() / 2.0)
    }

    /// Certified covering radius of the image, in the Frobenius metric.
    pub fn mesh(&self) -> f64 {
        self.kind.chart_lipschitz() * self.spacing * 3f64.sqrt() / 2.0
    }

    fn side(&self) -> i64 {
        2 * self.half_width + 1
    }

    fn coords(&self, idx: i64) -> Option<[f64; 3]> {
        let s = self.side();
        let (i, rest) = (idx % s, idx / s);
        let (j, k) = (rest % s, rest / s);
        let h = self.spacing;
        let v = [
            (i - self.half_width) as f64 * h,
            (j - self.half_width) as f64 * h,
            (k - self.half_width) as f64 * h,
        ];
        let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        (r2 <= self.radius * self.radius * (1.0 + 1e-12)).then_some(v)
    }

    fn cube_len(&self) -> i64 {
        self.side().pow(3)
    }

    /// Grid points in exponential coordinates, in a fixed order.
    pub fn points(&self) -> Vec<[f64; 3]> {
        (0..self.cube_len()).filter_map(|i| self.coords(i)).collect()
    }

    pub fn len(&self) -> usize {
        (0..self.cube_len()).filter(|&i| self.coords(i).is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parallel map-reduce over grid points; the reduction must be
    /// associative and commutative for the result to be order independent.
    pub fn par_fold<T, F, R>(&self, identity: T, map: F, reduce: R) -> T
    where
        T: Send + Sync + Clone,
        F: Fn(T, [f64; 3]) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        let chunk = 1 << 14;
        let n = self.cube_len();
        let chunks = (n + chunk - 1) / chunk;
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = identity.clone();
                for i in c * chunk..((c + 1) * chunk).min(n) {
                    if let Some(v) = self.coords(i) {
                        acc = map(acc, v);
                    }
                }
                acc
            })
            .reduce(|| identity.clone(), &reduce)
    }
}

/// Closure of a set of rotations under multiplication, deduplicated at
/// Frobenius tolerance `tol`. Stops once `cap` elements are reached.
pub fn close_rotations(gens: &[Rotation], tol: f64, cap: usize) -> Vec<Rotation> {
    let mut elems = vec![Rotation::IDENTITY];
    let mut frontier = vec![Rotation::IDENTITY];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if elems.iter().all(|e| e.distance(&y) > tol) {
                elems.push(y);
                frontier.push(y);
                if elems.len() >= cap {
                    return elems;
                }
            }
        }
    }
    elems
}

pub fn close_quats(gens: &[Quat], tol: f64, cap: usize) -> Vec<Quat> {
    let mut elems = vec![Quat::IDENTITY];
    let mut frontier = vec![Quat::IDENTITY];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if elems.iter().all(|e| e.distance(&y) > tol) {
                elems.push(y);
                frontier.push(y);
                if elems.len() >= cap {
                    return elems;
                }
            }
        }
    }
    elems
}

/// Finite rotation groups in standard position.
pub mod finite {
    use super::*;

    const TOL: f64 = 1e-9;
    const Z: [f64; 3] = [0.0, 0.0, 1.0];

    /// Cyclic group of order `n` about the z-axis.
    pub fn cyclic(n: usize) -> Vec<Rotation> {
        (0..n).map(|k| Rotation::about_axis(Z, 2.0 * PI * k as f64 / n as f64)).collect()
    }

    /// Dihedral group of order `2n`: `cyclic(n)` plus half turns about
    /// horizontal axes at angles `kπ/n`.
    pub fn dihedral(n: usize) -> Vec<Rotation> {
        let mut out = cyclic(n);
        for k in 0..n {
            let phi = PI * k as f64 / n as f64;
            out.push(Rotation::about_axis([phi.cos(), phi.sin(), 0.0], PI));
        }
        out
    }

    pub fn tetrahedral() -> Vec<Rotation> {
        close_rotations(
            &[Rotation::about_axis(Z, PI), Rotation::about_axis([1.0, 1.0, 1.0], 2.0 * PI / 3.0)],
            TOL,
            100,
        )
    }

    pub fn octahedral() -> Vec<Rotation> {
        close_rotations(
            &[Rotation::about_axis(Z, PI / 2.0), Rotation::about_axis([1.0, 1.0, 1.0], 2.0 * PI / 3.0)],
            TOL,
            100,
        )
    }

    /// Rotation group of the icosahedron with vertices at cyclic permutations
    /// of `(0, ±1, ±φ)`.
    pub fn icosahedral() -> Vec<Rotation> {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        close_rotations(
            &[
                Rotation::about_axis([0.0, 1.0, phi], 2.0 * PI / 5.0),
                Rotation::about_axis([1.0, 1.0, 1.0], 2.0 * PI / 3.0),
            ],
            TOL,
            200,
        )
    }

    /// Both lifts of every rotation to SU(2).
    pub fn binary_lift(rotations: &[Rotation]) -> Vec<Quat> {
        rotations.iter().flat_map(|r| {
            let q = r.to_quat();
            [q, q.neg()]
        })
        .collect()
    }
}

/// Static kd-tree over points of ℝ⁴ for exact nearest-neighbour queries.
pub struct KdTree4 {
    points: Vec<[f64; 4]>,
    ids: Vec<usize>,
}

impl KdTree4 {
    pub fn build(points: Vec<[f64; 4]>) -> Self {
        let mut items: Vec<([f64; 4], usize)> = points.into_iter().enumerate().map(|(i, p)| (p, i)).collect();
        Self::arrange(&mut items, 0);
        let (points, ids) = items.into_iter().unzip();
        Self { points, ids }
    }

    fn arrange(items: &mut [([f64; 4], usize)], depth: usize) {
        if items.len() <= 1 {
            return;
        }
        let dim = depth % 4;
        let mid = items.len() / 2;
        items.select_nth_unstable_by(mid, |a, b| a.0[dim].total_cmp(&b.0[dim]));
        let (left, right) = items.split_at_mut(mid);
        Self::arrange(left, depth + 1);
        Self::arrange(&mut right[1..], depth + 1);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Nearest stored point: `(original index, Euclidean distance)`.
    pub fn nearest(&self, q: &[f64; 4]) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(q, 0, self.points.len(), 0, &mut best);
        Some((self.ids[best.0], best.1.sqrt()))
    }

    /// Whether some stored point lies within squared distance `r2` of `q`.
    pub fn any_within(&self, q: &[f64; 4], r2: f64) -> bool {
        self.probe(q, r2, 0, self.points.len(), 0)
    }

    fn probe(&self, q: &[f64; 4], r2: f64, lo: usize, hi: usize, depth: usize) -> bool {
        if lo >= hi {
            return false;
        }
        let mid = lo + (hi - lo) / 2;
        let p = &self.points[mid];
        if p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() <= r2 {
            return true;
        }
        let dim = depth % 4;
        let diff = q[dim] - p[dim];
        let (near, far) = if diff < 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.probe(q, r2, near.0, near.1, depth + 1) || (diff * diff <= r2 && self.probe(q, r2, far.0, far.1, depth + 1))
    }

    fn search(&self, q: &[f64; 4], lo: usize, hi: usize, depth: usize, best: &mut (usize, f64)) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let p = &self.points[mid];
        let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
        if d2 < best.1 || (d2 == best.1 && self.ids[mid] < self.ids.get(best.0).copied().unwrap_or(usize::MAX)) {
            *best = (mid, d2);
        }
        let dim = depth % 4;
        let diff = q[dim] - p[dim];
        let (near, far) = if diff < 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(q, near.0, near.1, depth + 1, best);
        if diff * diff <= best.1 {
            self.search(q, far.0, far.1, depth + 1, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_group_orders() {
        assert_eq!(finite::tetrahedral().len(), 12);
        assert_eq!(finite::octahedral().len(), 24);
        assert_eq!(finite::icosahedral().len(), 60);
        assert_eq!(finite::dihedral(5).len(), 10);
        assert_eq!(finite::binary_lift(&finite::icosahedral()).len(), 120);
    }

    #[test]
    fn covering_map_matches_exponentials() {
        let v = [0.3, -1.1, 0.7];
        let r = Rotation::exp(v);
        let q = Quat::exp(v);
        assert!(q.to_rotation().distance(&r) < 1e-12);
        assert!(r.to_quat().to_rotation().distance(&r) < 1e-12);
        let h = Quat::exp([0.0, 0.0, 2.0 * PI]);
        assert!(h.distance(&Quat::IDENTITY.neg()) < 1e-12);
    }

    #[test]
    fn frobenius_identity_for_rotations() {
        let a = Rotation::exp([0.1, 0.2, 0.3]);
        let b = Rotation::exp([-0.4, 1.0, 0.0]);
        let lhs = a.distance(&b).powi(2);
        let rhs = 6.0 - 2.0 * a.trace_inner(&b);
        assert!((lhs - rhs).abs() < 1e-12);
        // ‖A − B‖_F = 2√2 sin(θ/2)
        let theta = a.transpose().mul(&b).angle();
        assert!((a.distance(&b) - 2.0 * 2f64.sqrt() * (theta / 2.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn chart_lipschitz_bound_holds_on_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let u: [f64; 3] = std::array::from_fn(|_| rng.random_range(-3.5..3.5));
            let v: [f64; 3] = std::array::from_fn(|i| u[i] + rng.random_range(-0.3..0.3));
            let duv = ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2) + (u[2] - v[2]).powi(2)).sqrt();
            let so3 = Rotation::exp(u).distance(&Rotation::exp(v));
            assert!(so3 <= RotationKind::So3.chart_lipschitz() * duv + 1e-12);
            let su2 = Quat::exp(u).distance(&Quat::exp(v));
            assert!(su2 <= RotationKind::Su2.chart_lipschitz() * duv + 1e-12);
        }
    }

    #[test]
    fn kd_tree_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<[f64; 4]> = (0..500).map(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0))).collect();
        let tree = KdTree4::build(pts.clone());
        for _ in 0..200 {
            let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.2..1.2));
            let brute = pts
                .iter()
                .map(|p| p.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min);
            let (_, d) = tree.nearest(&q).unwrap();
            assert_eq!(d, brute);
        }
    }

    #[test]
    fn grid_mesh_covers_random_rotations() {
        use rand::{Rng, SeedableRng};
        let grid = ExpGrid::covering(RotationKind::So3, 0.4);
        let pts: Vec<Rotation> = grid.points().into_iter().map(Rotation::exp).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-PI..PI));
            let r = Rotation::exp(v);
            let d = pts.iter().map(|p| p.distance(&r)).fold(f64::INFINITY, f64::min);
            assert!(d <= grid.mesh());
        }
    }
}
