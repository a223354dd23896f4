//! Low-degree cohomology of finite groups with coefficients in finite
//! modules: normalized cochains, coboundaries, `H²` and the splitting of an
//! extension after a finite quotient.

mod extension;
mod h2;

pub use extension::{
    cocycle_from_section, parse_extension, split_after_quotient, surrogates, twisted_extension, ExtensionData,
    SplittingReport,
};
pub use h2::{coboundary_matrix, cocycle_matrix, h2, MAX_GROUP_ORDER, MAX_MODULE_RANK};

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::finite::{FiniteGroup, FiniteGroupError};
use crate::linalg::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CohomologyError {
    #[error(transparent)]
    Group(#[from] FiniteGroupError),
    #[error("invalid module: {0}")]
    Module(String),
    #[error("size limit exceeded: |F| = {order}, rank = {rank}")]
    SizeLimit { order: usize, rank: usize },
    #[error("expected a cochain of degree {expected}, got {got}")]
    Degree { expected: u8, got: u8 },
    #[error("cochain is not normalized")]
    NotNormalized,
    #[error("invalid extension: {0}")]
    Extension(String),
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("kernel is not a surrogate ((1/N)Z)^d/Z^d with {m} | N")]
    NotSurrogate { m: i64 },
    #[error("no solution of m·f + δa' = 0 modulo {modulus}; increase N")]
    NoSolution { modulus: i64 },
}

/// `M = ℤ_{k₁} ⊕ … ⊕ ℤ_{k_r}` with `F` acting by integer matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteModule {
    group: FiniteGroup,
    factors: Vec<i64>,
    action: Vec<IntMatrix>,
}

impl FiniteModule {
    /// Checks that each matrix is well defined on `M` (`kᵢ | aᵢⱼ kⱼ`), that
    /// the identity acts trivially and that the action is multiplicative.
    pub fn new(group: FiniteGroup, factors: Vec<i64>, action: Vec<IntMatrix>) -> Result<Self, CohomologyError> {
        let r = factors.len();
        if factors.iter().any(|&k| k < 2) {
            return Err(CohomologyError::Module(format!("factors {factors:?} must be ≥ 2")));
        }
        if action.len() != group.order() || action.iter().any(|a| a.rows() != r || a.cols() != r) {
            return Err(CohomologyError::Module("one r×r matrix per group element".into()));
        }
        let module = Self { group, factors, action };
        for a in &module.action {
            for i in 0..r {
                for j in 0..r {
                    if (a[(i, j)] * module.factors[j]) % module.factors[i] != 0 {
                        return Err(CohomologyError::Module(format!("entry ({i}, {j}) is not well defined")));
                    }
                }
            }
        }
        let reduce = |a: &IntMatrix| -> IntMatrix {
            let mut b = a.clone();
            for i in 0..r {
                for j in 0..r {
                    b[(i, j)] = a[(i, j)].rem_euclid(module.factors[i]);
                }
            }
            b
        };
        let e = module.group.identity();
        if reduce(&module.action[e]) != reduce(&IntMatrix::identity(r)) {
            return Err(CohomologyError::Module("identity acts nontrivially".into()));
        }
        for g in module.group.elements() {
            for h in module.group.elements() {
                let gh = module.group.mul(g, h);
                if reduce(&module.action[g].mul(&module.action[h])) != reduce(&module.action[gh]) {
                    return Err(CohomologyError::Module(format!(
                        "action is not a homomorphism at ({}, {})",
                        module.group.id(g),
                        module.group.id(h)
                    )));
                }
            }
        }
        Ok(module)
    }

    pub fn trivial(group: FiniteGroup, factors: Vec<i64>) -> Result<Self, CohomologyError> {
        let r = factors.len();
        let action = vec![IntMatrix::identity(r); group.order()];
        Self::new(group, factors, action)
    }

    /// The module generated by `g ↦ A(g)` on generators.
    pub fn from_generators(
        group: FiniteGroup,
        factors: Vec<i64>,
        images: &[(usize, IntMatrix)],
    ) -> Result<Self, CohomologyError> {
        let r = factors.len();
        let mut mats: Vec<Option<IntMatrix>> = vec![None; group.order()];
        mats[group.identity()] = Some(IntMatrix::identity(r));
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (g, a) in images {
                let y = group.mul(x, *g);
                if mats[y].is_none() {
                    let mut m = mats[x].as_ref().expect("visited").mul(a);
                    for i in 0..r {
                        for j in 0..r {
                            m[(i, j)] = m[(i, j)].rem_euclid(factors[i]);
                        }
                    }
                    mats[y] = Some(m);
                    queue.push_back(y);
                }
            }
        }
        let action = mats
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| CohomologyError::Module("images do not generate the group".into()))?;
        Self::new(group, factors, action)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> i64 {
        self.factors.iter().product()
    }

    /// Least common multiple of the factors.
    pub fn exponent(&self) -> i64 {
        self.factors.iter().fold(1, |a, &k| a.lcm(&k))
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter().zip(&self.factors).map(|(x, k)| x.rem_euclid(*k)).collect()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    pub fn scale(&self, m: i64, a: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().map(|x| m * x).collect::<Vec<_>>())
    }

    /// `g·v`.
    pub fn act(&self, g: usize, v: &[i64]) -> Vec<i64> {
        self.reduce(&self.action[g].mul_vec(v))
    }

    /// All elements in lexicographic order of coordinates.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &k in &self.factors {
            out = out.into_iter().flat_map(|v| (0..k).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }
}

/// A normalized or unnormalized cochain `Fᵈ → M`, `d ∈ {1, 2}`. Values are
/// indexed by `g` (degree 1) or `g·|F| + h` (degree 2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CochainTable {
    pub degree: u8,
    pub order: usize,
    pub values: Vec<Vec<i64>>,
    pub normalized: bool,
}

impl CochainTable {
    pub fn new(module: &FiniteModule, degree: u8, values: Vec<Vec<i64>>) -> Result<Self, CohomologyError> {
        let n = module.group.order();
        let expected = match degree {
            1 => n,
            2 => n * n,
            d => return Err(CohomologyError::Degree { expected: 2, got: d }),
        };
        if values.len() != expected || values.iter().any(|v| v.len() != module.rank()) {
            return Err(CohomologyError::Module(format!("cochain needs {expected} values of rank {}", module.rank())));
        }
        let values: Vec<Vec<i64>> = values.iter().map(|v| module.reduce(v)).collect();
        let e = module.group.identity();
        let zero = |v: &Vec<i64>| v.iter().all(|&x| x == 0);
        let normalized = match degree {
            1 => zero(&values[e]),
            _ => (0..n).all(|g| zero(&values[e * n + g]) && zero(&values[g * n + e])),
        };
        Ok(Self { degree, order: n, values, normalized })
    }

    pub fn zero(module: &FiniteModule, degree: u8) -> Self {
        let n = module.group.order();
        let len = if degree == 1 { n } else { n * n };
        Self::new(module, degree, vec![module.zero(); len]).expect("zero cochain")
    }

    pub fn at1(&self, g: usize) -> &[i64] {
        &self.values[g]
    }

    pub fn at2(&self, g: usize, h: usize) -> &[i64] {
        &self.values[g * self.order + h]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn add(&self, module: &FiniteModule, other: &CochainTable) -> CochainTable {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| module.add(a, b)).collect();
        CochainTable::new(module, self.degree, values).expect("same shape")
    }

    pub fn scale(&self, module: &FiniteModule, m: i64) -> CochainTable {
        let values = self.values.iter().map(|a| module.scale(m, a)).collect();
        CochainTable::new(module, self.degree, values).expect("same shape")
    }
}

/// `g·f(h,k) − f(gh,k) + f(g,hk) − f(g,h) = 0` for all triples.
pub fn is_cocycle(module: &FiniteModule, f: &CochainTable) -> bool {
    let grp = &module.group;
    f.degree == 2
        && grp.elements().all(|g| {
            grp.elements().all(|h| {
                grp.elements().all(|k| {
                    let lhs = module.add(&module.act(g, f.at2(h, k)), f.at2(g, grp.mul(h, k)));
                    let rhs = module.add(f.at2(grp.mul(g, h), k), f.at2(g, h));
                    lhs == rhs
                })
            })
        })
}

/// `δa(g,h) = a(g) + g·a(h) − a(gh)`.
pub fn coboundary(module: &FiniteModule, a: &CochainTable) -> Result<CochainTable, CohomologyError> {
    if a.degree != 1 {
        return Err(CohomologyError::Degree { expected: 1, got: a.degree });
    }
    if !a.normalized {
        return Err(CohomologyError::NotNormalized);
    }
    let grp = &module.group;
    let values = grp
        .elements()
        .flat_map(|g| grp.elements().map(move |h| (g, h)))
        .map(|(g, h)| module.sub(&module.add(a.at1(g), &module.act(g, a.at1(h))), a.at1(grp.mul(g, h))))
        .collect();
    CochainTable::new(module, 2, values)
}
