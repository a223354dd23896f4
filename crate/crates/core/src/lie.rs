//! Real Lie algebras given by rational structure constants and an inner
//! product: derived subalgebra, perfectness, the Ricci minimum, the Myers
//! diameter bound and exponential coverage of SO(3)/SU(2).

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{ExpGrid, Quat, Rotation, RotationKind, SamplableGroup};
use crate::group::rotation::KdTree4;
use crate::linalg::{parse_q, poly, q, q_frac, q_to_f64, serialize_q_rows, span_basis, RatMatrix, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("structure constants have the wrong shape for dimension {0}")]
    Shape(usize),
    #[error("structure constants are not antisymmetric at ({0}, {1}, {2})")]
    Antisymmetry(usize, usize, usize),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("gram matrix is not symmetric positive definite")]
    GramNotPositiveDefinite,
    #[error("inner product is not ad-invariant")]
    NotInvariant,
    #[error("algebra is not semisimple: derived subalgebra has dimension {derived} < {n}")]
    NotSemisimple { derived: usize, n: usize },
    #[error("invalid Lie algebra descriptor: {0}")]
    Descriptor(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// `[e_i, e_j] = Σ_k c[i][j][k] e_k` with inner product `⟨e_i, e_j⟩ = gram[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    n: usize,
    c: Vec<Vec<Vec<Q>>>,
    gram: RatMatrix,
    invariant: bool,
}

impl LieAlgebraData {
    pub fn new(c: Vec<Vec<Vec<Q>>>, gram: RatMatrix) -> Result<Self, LieError> {
        let n = c.len();
        if c.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) || gram.rows() != n || gram.cols() != n {
            return Err(LieError::Shape(n));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(LieError::Antisymmetry(i, j, k));
                    }
                }
            }
        }
        if !gram.is_positive_definite() {
            return Err(LieError::GramNotPositiveDefinite);
        }
        let mut l = Self { n, c, gram, invariant: false };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let e = |a: usize| unit(n, a);
                    let t1 = l.bracket(&e(i), &l.bracket(&e(j), &e(k)));
                    let t2 = l.bracket(&e(j), &l.bracket(&e(k), &e(i)));
                    let t3 = l.bracket(&e(k), &l.bracket(&e(i), &e(j)));
                    if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return Err(LieError::Jacobi(i, j, k));
                    }
                }
            }
        }
        l.invariant = l.check_invariance();
        Ok(l)
    }

    fn check_invariance(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let s: Q = (0..n)
                        .map(|l| &self.c[i][j][l] * &self.gram[(l, k)] + &self.c[i][k][l] * &self.gram[(j, l)])
                        .sum();
                    s.is_zero()
                })
            })
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Q>>] {
        &self.c
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// Whether the inner product is ad-invariant.
    pub fn is_invariant(&self) -> bool {
        self.invariant
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let s = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    *o += &s * &self.c[i][j][k];
                }
            }
        }
        out
    }

    /// Matrix of `ad(e_i)`: column `j` holds `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            for k in 0..self.n {
                m[(k, j)] = self.c[i][j][k].clone();
            }
        }
        m
    }

    /// Gram matrix replaced by `t²·gram`.
    pub fn with_scaled_gram(&self, t_squared: &Q) -> Self {
        Self::new(self.c.clone(), self.gram.scale(t_squared)).expect("scaling preserves validity")
    }
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = q(1);
    v
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subalgebra {
    #[serde(serialize_with = "serialize_q_rows")]
    pub basis: Vec<Vec<Q>>,
    pub dim: usize,
    pub is_ideal: bool,
}

/// `[𝔤, 𝔤] = span{[e_i, e_j]}`, by exact row reduction.
pub fn derived_subalgebra(l: &LieAlgebraData) -> Subalgebra {
    let n = l.n;
    let brackets: Vec<Vec<Q>> = (0..n).flat_map(|i| (i + 1..n).map(move |j| l.c[i][j].clone())).collect();
    let basis = span_basis(&brackets, n);
    let dim = basis.len();
    let is_ideal = basis.iter().all(|b| {
        (0..n).all(|i| {
            let mut ext = basis.clone();
            ext.push(l.bracket(&unit(n, i), b));
            span_basis(&ext, n).len() == dim
        })
    });
    Subalgebra { basis, dim, is_ideal }
}

/// `dim [𝔤, 𝔤] = dim 𝔤`; sound for compact-type algebras only.
pub fn is_perfect(l: &LieAlgebraData) -> Result<bool, LieError> {
    if !l.invariant {
        return Err(LieError::NotInvariant);
    }
    Ok(derived_subalgebra(l).dim == l.n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RicciMin {
    pub value: f64,
    /// The exact value when it is rational.
    #[serde(serialize_with = "serialize_opt_q")]
    pub exact: Option<Q>,
    /// Condition number of the gram matrix.
    pub gram_condition: f64,
}

fn serialize_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    x.as_ref().map(ToString::to_string).serialize(s)
}

/// The form `Q_ab = ¼ tr(G⁻¹ ad(e_a)ᵀ G ad(e_b))`, so that
/// `Q(x, x) = ¼‖ad x‖²_HS` for the inner product `G`.
pub fn ricci_form(l: &LieAlgebraData) -> RatMatrix {
    let n = l.n;
    let g_inv = l.gram.inverse().expect("positive definite");
    let ads: Vec<RatMatrix> = (0..n).map(|i| l.ad(i)).collect();
    let mut form = RatMatrix::zeros(n, n);
    for a in 0..n {
        let left = g_inv.mul(&ads[a].transpose()).mul(&l.gram);
        for b in 0..n {
            form[(a, b)] = left.mul(&ads[b]).trace() * q_frac(1, 4);
        }
    }
    form
}

/// `Ric_min = ¼ min_{‖x‖=1} ‖ad x‖²_HS`: the smallest eigenvalue of
/// `G⁻¹Q`. Taken from the characteristic polynomial when it has a matching
/// rational root, numerically otherwise.
pub fn ricci_min(l: &LieAlgebraData) -> Result<RicciMin, LieError> {
    if !l.invariant {
        return Err(LieError::NotInvariant);
    }
    let derived = derived_subalgebra(l).dim;
    if derived != l.n {
        return Err(LieError::NotSemisimple { derived, n: l.n });
    }
    let n = l.n;
    let form = ricci_form(l);
    let to_f = |m: &RatMatrix| DMatrix::from_fn(n, n, |i, j| q_to_f64(&m[(i, j)]));
    let g = to_f(&l.gram);
    let chol = g.clone().cholesky().expect("positive definite gram");
    let l_inv = chol.l().try_inverse().expect("invertible factor");
    let sym = &l_inv * to_f(&form) * l_inv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5;
    let value = SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let g_eigs = SymmetricEigen::new(g).eigenvalues;
    let gram_condition = g_eigs.max() / g_eigs.min();
    let char_poly = poly::char_poly(&l.gram.inverse().expect("positive definite").mul(&form));
    let exact = poly::rational_roots(&char_poly)
        .into_iter()
        .find(|r| r.is_positive() && (q_to_f64(r) - value).abs() <= 1e-9 * value.abs().max(1.0));
    let value = exact.as_ref().map(q_to_f64).unwrap_or(value);
    Ok(RicciMin { value, exact, gram_condition })
}

/// `Δ = π √((n − 1)/Ric_min)`.
pub fn myers_bound(l: &LieAlgebraData) -> Result<f64, LieError> {
    let ric = ricci_min(l)?;
    Ok(PI * ((l.n as f64 - 1.0) / ric.value).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    /// Largest distance from an oracle-net point to the exponential image.
    pub gap: f64,
    pub threshold: f64,
    pub covered: bool,
    pub grid_points: usize,
    pub oracle_points: usize,
    pub oracle_mesh: f64,
}

/// The scale `s` with `c = s·ε_ijk`, if the constants have that form.
fn levi_civita_scale(l: &LieAlgebraData) -> Option<Q> {
    if l.n != 3 {
        return None;
    }
    let s = l.c[0][1][2].clone();
    if !s.is_positive() {
        return None;
    }
    let eps = |i: usize, j: usize, k: usize| -> i64 {
        match (i, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
            _ => 0,
        }
    };
    let ok = (0..3).all(|i| (0..3).all(|j| (0..3).all(|k| l.c[i][j][k] == &s * q(eps(i, j, k)))));
    ok.then_some(s)
}

/// Checks `exp(B(0, Δ)) = G` for `G ∈ {SO(3), SU(2)}`: a grid of spacing
/// `mesh` in the `Δ`-ball (norm from the gram matrix) is mapped through the
/// closed-form exponential and compared with an oracle net of mesh
/// `oracle_mesh` (default `2·mesh`). Grid points beyond the covering radius
/// of the group are dropped, which can only enlarge the gap.
pub fn exp_coverage_check(
    g: &SamplableGroup,
    l: &LieAlgebraData,
    delta: f64,
    mesh: f64,
    oracle_mesh: Option<f64>,
) -> Result<CoverageReport, LieError> {
    let kind = match g {
        SamplableGroup::So3 => RotationKind::So3,
        SamplableGroup::Su2 => RotationKind::Su2,
        other => return Err(LieError::Unsupported(format!("exponential coverage of {}", other.name()))),
    };
    let scale = levi_civita_scale(l)
        .ok_or_else(|| LieError::Unsupported("structure constants must be a positive multiple of ε_ijk".into()))?;
    if !(delta > 0.0 && mesh > 0.0) {
        return Err(LieError::Unsupported("Δ and mesh must be positive".into()));
    }
    let s = q_to_f64(&scale);
    let gram: Vec<Vec<f64>> = l.gram.to_f64_rows();
    let g_norm = |v: &[f64; 3]| -> f64 {
        (0..3).map(|i| (0..3).map(|j| v[i] * gram[i][j] * v[j]).sum::<f64>()).sum::<f64>().sqrt()
    };
    // chart coordinates: Σ vₖ eₖ corresponds to s·v in the basis with c = ε
    let g_min_eig = {
        let m = DMatrix::from_fn(3, 3, |i, j| gram[i][j]);
        SymmetricEigen::new(m).eigenvalues.min()
    };
    let euclid_radius = (delta / g_min_eig.sqrt()).min((kind.covering_radius() + mesh * s * 3f64.sqrt()) / s);
    let grid = ExpGrid::new(kind, mesh, euclid_radius);
    let pts: Vec<[f64; 3]> = grid.points().into_iter().filter(|v| g_norm(v) <= delta).collect();
    let to_quat = |v: &[f64; 3]| -> [f64; 4] {
        let w = [v[0] * s, v[1] * s, v[2] * s];
        let qv = match kind {
            RotationKind::Su2 => Quat::exp(w),
            RotationKind::So3 => Rotation::exp(w).to_quat(),
        };
        qv.0
    };
    let tree = KdTree4::build(pts.iter().map(to_quat).collect());
    let oracle_mesh = oracle_mesh.unwrap_or(2.0 * mesh);
    let oracle = ExpGrid::covering(kind, oracle_mesh / (kind.chart_lipschitz() * 3f64.sqrt() / 2.0));
    // chord to the nearest grid point (up to sign for SO(3)); oracle points
    // far from the identity come first so that the running maximum grows
    // early and most later queries only need a bounded probe
    let mut queries: Vec<[f64; 4]> = oracle
        .points()
        .into_iter()
        .map(|v| match kind {
            RotationKind::Su2 => Quat::exp(v).0,
            RotationKind::So3 => Rotation::exp(v).to_quat().0,
        })
        .collect();
    queries.sort_by(|a, b| a[0].abs().total_cmp(&b[0].abs()));
    let nearest_chord = |o: &[f64; 4]| -> f64 {
        let a = tree.nearest(o).map_or(f64::INFINITY, |(_, c)| c);
        match kind {
            RotationKind::Su2 => a,
            RotationKind::So3 => a.min(tree.nearest(&o.map(|x| -x)).map_or(f64::INFINITY, |(_, c)| c)),
        }
    };
    let within = |o: &[f64; 4], c: f64| {
        tree.any_within(o, c * c) || (kind == RotationKind::So3 && tree.any_within(&o.map(|x| -x), c * c))
    };
    let chunk = |part: &[[f64; 4]], mut cmax: f64| {
        for o in part {
            if !within(o, cmax) {
                cmax = cmax.max(nearest_chord(o));
            }
        }
        cmax
    };
    let head = queries.len().min(256);
    let seed = chunk(&queries[..head], 0.0);
    let chord = queries[head..].par_chunks(4096).map(|part| chunk(part, seed)).reduce(|| seed, f64::max);
    let gap = match kind {
        RotationKind::Su2 => std::f64::consts::SQRT_2 * chord,
        // ‖R₁ − R₂‖_F = 2√2 sin(θ/2) with chord c = 2 sin(θ/4)
        RotationKind::So3 => 2f64.sqrt() * 2.0 * chord * (1.0 - chord * chord / 4.0).max(0.0).sqrt(),
    };
    let threshold = 2.0 * mesh + oracle.mesh();
    Ok(CoverageReport {
        gap,
        threshold,
        covered: gap <= threshold,
        grid_points: pts.len(),
        oracle_points: oracle.len(),
        oracle_mesh: oracle.mesh(),
    })
}

/// Standard algebras of the test corpus.
pub mod corpus {
    use super::*;

    fn levi_civita(scale: i64) -> Vec<Vec<Vec<Q>>> {
        let mut c = vec![vec![vec![Q::zero(); 3]; 3]; 3];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[i][j][k] = q(scale);
            c[j][i][k] = q(-scale);
        }
        c
    }

    /// so(3) with `[Lᵢ, Lⱼ] = ε_ijk L_k`, orthonormal.
    pub fn so3() -> LieAlgebraData {
        LieAlgebraData::new(levi_civita(1), RatMatrix::identity(3)).expect("so(3)")
    }

    /// su(2) in the basis `X_k = −(i/2)σ_k`, with the inner product carried
    /// over from so(3) by `X_k ↦ L_k`.
    pub fn su2() -> LieAlgebraData {
        LieAlgebraData::new(levi_civita(1), RatMatrix::identity(3)).expect("su(2)")
    }

    /// su(2) in the basis `E_k = −iσ_k`, orthonormal for `−½ tr(xy)`.
    pub fn su2_trace_form() -> LieAlgebraData {
        LieAlgebraData::new(levi_civita(2), RatMatrix::identity(3)).expect("su(2), trace form")
    }

    /// The abelian algebra ℝᵐ.
    pub fn abelian(m: usize) -> LieAlgebraData {
        LieAlgebraData::new(vec![vec![vec![Q::zero(); m]; m]; m], RatMatrix::identity(m)).expect("ℝᵐ")
    }

    pub fn direct_sum(a: &LieAlgebraData, b: &LieAlgebraData) -> LieAlgebraData {
        let (na, nb) = (a.n, b.n);
        let n = na + nb;
        let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
        let mut gram = RatMatrix::zeros(n, n);
        for i in 0..na {
            for j in 0..na {
                gram[(i, j)] = a.gram[(i, j)].clone();
                for k in 0..na {
                    c[i][j][k] = a.c[i][j][k].clone();
                }
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                gram[(na + i, na + j)] = b.gram[(i, j)].clone();
                for k in 0..nb {
                    c[na + i][na + j][na + k] = b.c[i][j][k].clone();
                }
            }
        }
        LieAlgebraData::new(c, gram).expect("direct sum")
    }

    /// u(2) = su(2) ⊕ ℝ.
    pub fn u2() -> LieAlgebraData {
        direct_sum(&su2(), &abelian(1))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LieDescriptor {
    n: usize,
    c: Vec<Vec<Vec<serde_json::Value>>>,
    gram: Vec<Vec<serde_json::Value>>,
}

fn parse_entry(v: &serde_json::Value) -> Result<Q, LieError> {
    match v {
        serde_json::Value::String(s) => parse_q(s).ok_or_else(|| LieError::Descriptor(format!("bad rational `{s}`"))),
        serde_json::Value::Number(x) => x
            .as_i64()
            .map(q)
            .ok_or_else(|| LieError::Descriptor(format!("non-integer number {x}; use \"p/q\""))),
        other => Err(LieError::Descriptor(format!("bad entry {other}"))),
    }
}

/// Parses `{"n":3,"c":[[[...]]],"gram":[[...]]}` with entries `"p/q"`.
pub fn parse_lie(json: &str) -> Result<LieAlgebraData, LieError> {
    let d: LieDescriptor = serde_json::from_str(json).map_err(|e| LieError::Descriptor(e.to_string()))?;
    let c = d
        .c
        .iter()
        .map(|r| r.iter().map(|v| v.iter().map(parse_entry).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if c.len() != d.n {
        return Err(LieError::Shape(d.n));
    }
    let gram_rows = d.gram.iter().map(|r| r.iter().map(parse_entry).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
    if gram_rows.len() != d.n || gram_rows.iter().any(|r| r.len() != d.n) {
        return Err(LieError::Shape(d.n));
    }
    LieAlgebraData::new(c, RatMatrix::from_rows(&gram_rows))
}

/// Built-in algebras: `so3`, `su2`, `su2-trace`, `su2+su2`, `u2`, `so3+R`, `R^m`.
pub fn named_algebra(name: &str) -> Result<LieAlgebraData, LieError> {
    Ok(match name {
        "so3" => corpus::so3(),
        "su2" => corpus::su2(),
        "su2-trace" => corpus::su2_trace_form(),
        "su2+su2" => corpus::direct_sum(&corpus::su2(), &corpus::su2()),
        "u2" => corpus::u2(),
        "so3+R" => corpus::direct_sum(&corpus::so3(), &corpus::abelian(1)),
        _ => match name.strip_prefix("R^").and_then(|m| m.parse::<usize>().ok()) {
            Some(m) if m > 0 => corpus::abelian(m),
            _ => return Err(LieError::Descriptor(format!("unknown algebra `{name}`"))),
        },
    })
}
