use serde::Serialize;

use super::{IntegerRep, RepError};
use crate::linalg::{IntMatrix, RatMatrix, Q};

pub const DEFAULT_ENTRY_BOUND: i64 = 3;

/// Enumeration stops being attempted past this many free entries.
const MAX_FREE_ENTRIES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GlzConjugacy {
    /// `P·A(g)·P⁻¹ = B(σ(g))` for every `g`, verified exactly.
    Found { p: IntMatrix, p_inv: IntMatrix, sigma: Vec<usize> },
    /// No conjugator with entries bounded by `bound`; `exhaustive` is false
    /// when some solution space was too large to enumerate.
    NotFoundWithinBound { bound: i64, exhaustive: bool },
}

impl GlzConjugacy {
    pub fn is_found(&self) -> bool {
        matches!(self, GlzConjugacy::Found { .. })
    }
}

/// Searches for `P ∈ GL(m, ℤ)` and an isomorphism `σ` of the underlying
/// groups with `P·A(g)·P⁻¹ = B(σ(g))`. For each `σ` the conjugators form
/// the integer points of a rational linear space; its free coordinates are
/// enumerated in `[−bound, bound]`. Ties are broken by the lexicographically
/// smallest `P`, then `σ`.
pub fn glz_conjugate(a: &IntegerRep, b: &IntegerRep, bound: i64) -> Result<GlzConjugacy, RepError> {
    let m = a.dim();
    if b.dim() != m {
        return Err(RepError::DimensionMismatch(m, b.dim()));
    }
    let gens = a.group().generators();
    let mut best: Option<(Vec<Vec<i64>>, IntMatrix, IntMatrix, Vec<usize>)> = None;
    let mut exhaustive = true;
    for sigma in a.group().isomorphisms(b.group()) {
        // P·A(g) − B(σg)·P = 0, unknowns P[i][k] at i·m + k
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for &g in &gens {
            let (ag, bg) = (a.matrix(g), b.matrix(sigma[g]));
            for i in 0..m {
                for j in 0..m {
                    let mut row = vec![Q::from_integer(0.into()); m * m];
                    for k in 0..m {
                        row[i * m + k] += Q::from_integer(ag[(k, j)].into());
                        row[k * m + j] -= Q::from_integer(bg[(i, k)].into());
                    }
                    rows.push(row);
                }
            }
        }
        let basis = if rows.is_empty() {
            (0..m * m).map(|i| (0..m * m).map(|j| Q::from_integer(i64::from(i == j).into())).collect()).collect()
        } else {
            RatMatrix::from_rows(&rows).nullspace()
        };
        if basis.is_empty() {
            continue;
        }
        let free: Vec<usize> =
            basis.iter().map(|v| v.iter().position(|x| *x == Q::from_integer(1.into())).expect("standard basis")).collect();
        if free.len() > MAX_FREE_ENTRIES {
            exhaustive = false;
            continue;
        }
        let width = (2 * bound + 1) as usize;
        let total = width.checked_pow(free.len() as u32).expect("bounded enumeration");
        for idx in 0..total {
            let mut rest = idx;
            let coeffs: Vec<i64> = (0..free.len())
                .map(|_| {
                    let c = (rest % width) as i64 - bound;
                    rest /= width;
                    c
                })
                .collect();
            let Some(p) = combine(&basis, &coeffs, m, bound) else { continue };
            if p.det().abs() != 1 {
                continue;
            }
            let p_inv = RatMatrix::from_int(&p).inverse().and_then(|x| x.to_int()).expect("unimodular");
            let ok = a.group().elements().all(|g| p.mul(a.matrix(g)).mul(&p_inv) == *b.matrix(sigma[g]));
            if !ok {
                continue;
            }
            let key = p.to_rows();
            let better = match &best {
                None => true,
                Some((k, _, _, s)) => (&key, &sigma) < (k, s),
            };
            if better {
                best = Some((key, p, p_inv, sigma.clone()));
            }
        }
    }
    Ok(match best {
        Some((_, p, p_inv, sigma)) => GlzConjugacy::Found { p, p_inv, sigma },
        None => GlzConjugacy::NotFoundWithinBound { bound, exhaustive },
    })
}

fn combine(basis: &[Vec<Q>], coeffs: &[i64], m: usize, bound: i64) -> Option<IntMatrix> {
    let mut p = IntMatrix::zeros(m, m);
    for idx in 0..m * m {
        let x: Q = basis.iter().zip(coeffs).map(|(v, &c)| &v[idx] * Q::from_integer(c.into())).sum();
        if !x.is_integer() {
            return None;
        }
        let v: i64 = x.to_integer().try_into().ok()?;
        if v.abs() > bound {
            return None;
        }
        p[(idx / m, idx % m)] = v;
    }
    Some(p)
}
