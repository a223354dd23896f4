use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::IntegerRep;
use crate::linalg::poly::{self, degree};
use crate::linalg::{q, rank_of, serialize_q_rows, span_basis, RatMatrix, Q};

/// Random draws of the generic-element method.
pub const GENERIC_DRAWS: usize = 20;
const DRAW_SEED: u64 = 0x1ce5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Irreducibility {
    Irreducible,
    /// Basis of a proper nonzero invariant subspace.
    Reducible {
        #[serde(serialize_with = "serialize_q_rows")]
        witness: Vec<Vec<Q>>,
    },
    Undecided { reason: String },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

fn rat(rep: &IntegerRep, g: usize) -> RatMatrix {
    RatMatrix::from_int(rep.matrix(g))
}

/// Whether `span(basis)` is invariant under every image.
pub fn is_invariant(rep: &IntegerRep, basis: &[Vec<Q>]) -> bool {
    let m = rep.dim();
    let r = rank_of(basis, m);
    rep.group().elements().all(|g| {
        let a = rat(rep, g);
        basis.iter().all(|v| {
            let mut ext = basis.to_vec();
            ext.push(a.mul_vec(v));
            rank_of(&ext, m) == r
        })
    })
}

fn proper_invariant(rep: &IntegerRep, basis: Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    let m = rep.dim();
    let basis = span_basis(&basis, m);
    (!basis.is_empty() && basis.len() < m && is_invariant(rep, &basis)).then_some(basis)
}

/// Rational irreducibility of `ρ ⊗ ℚ`. Complete for `m ≤ 2` (common rational
/// eigenvectors). For larger `m`, a generic element `z = Σ c_g ρ(g)` is drawn
/// repeatedly: kernels and images of `p(z)` for rational factors `p` of its
/// minimal polynomial are tested for invariance, and irreducibility is
/// declared only when some `z` has an irreducible minimal polynomial of
/// degree `m`.
pub fn rational_irreducible(rep: &IntegerRep) -> Irreducibility {
    match rep.dim() {
        1 => Irreducibility::Irreducible,
        2 => dim_two(rep),
        _ => generic_element(rep),
    }
}

fn dim_two(rep: &IntegerRep) -> Irreducibility {
    let non_scalar = rep.group().elements().find(|&g| {
        let a = rep.matrix(g);
        !(a[(0, 1)] == 0 && a[(1, 0)] == 0 && a[(0, 0)] == a[(1, 1)])
    });
    let Some(g) = non_scalar else {
        return Irreducibility::Reducible { witness: vec![vec![q(1), q(0)]] };
    };
    let a = rat(rep, g);
    let mut roots = poly::rational_roots(&poly::char_poly(&a));
    roots.sort_by(|a, b| b.cmp(a));
    roots.dedup();
    for lambda in roots {
        let shifted = a.add(&RatMatrix::identity(2).scale(&-lambda));
        for v in shifted.nullspace() {
            if let Some(w) = proper_invariant(rep, vec![v]) {
                return Irreducibility::Reducible { witness: w };
            }
        }
    }
    Irreducibility::Irreducible
}

fn generic_element(rep: &IntegerRep) -> Irreducibility {
    let m = rep.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(DRAW_SEED);
    let mut certified = false;
    for _ in 0..GENERIC_DRAWS {
        let mut z = RatMatrix::zeros(m, m);
        for g in rep.group().elements() {
            let c: i64 = rng.random_range(-3..=3);
            z = z.add(&rat(rep, g).scale(&q(c)));
        }
        let mu = poly::minimal_poly(&z);
        let factors = poly::factor_over_q(&mu);
        if factors.complete && factors.factors.len() == 1 && degree(&mu) == Some(m) {
            certified = true;
            continue;
        }
        for p in &factors.factors {
            let pz = poly::eval_matrix(p, &z);
            let kernel = pz.nullspace();
            let image: Vec<Vec<Q>> = pz.transpose().to_rows().into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
            for candidate in [kernel, image] {
                if let Some(w) = proper_invariant(rep, candidate) {
                    return Irreducibility::Reducible { witness: w };
                }
            }
        }
    }
    if certified {
        Irreducibility::Irreducible
    } else {
        Irreducibility::Undecided {
            reason: format!("no invariant subspace found in {GENERIC_DRAWS} draws and no draw certified irreducibility"),
        }
    }
}
