use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{CohomologyError, FiniteModule};
use crate::linalg::{hnf_mod, kernel_mod, quotient_invariants_mod, IntMatrix};

pub const MAX_GROUP_ORDER: usize = 12;
pub const MAX_MODULE_RANK: usize = 3;

/// Positions of the non-identity elements.
fn nontrivial(module: &FiniteModule) -> Vec<usize> {
    let e = module.group().identity();
    module.group().elements().filter(|&g| g != e).collect()
}

/// Matrix of `δ¹` on normalized cochains: columns `(g, j)`, rows `(g, h, i)`
/// over non-identity `g, h`, integer lifts of the action.
pub fn coboundary_matrix(module: &FiniteModule) -> IntMatrix {
    let idx = nontrivial(module);
    let (r, k) = (module.rank(), idx.len());
    let pos = |g: usize| idx.iter().position(|&x| x == g);
    let grp = module.group();
    let mut d = IntMatrix::zeros(k * k * r, k * r);
    for (a, &g) in idx.iter().enumerate() {
        for (b, &h) in idx.iter().enumerate() {
            let row = (a * k + b) * r;
            let act = module.action(g);
            for i in 0..r {
                d[(row + i, a * r + i)] += 1;
                for j in 0..r {
                    d[(row + i, b * r + j)] += act[(i, j)];
                }
                if let Some(c) = pos(grp.mul(g, h)) {
                    d[(row + i, c * r + i)] -= 1;
                }
            }
        }
    }
    d
}

/// Matrix of `δ²` on normalized cochains: columns `(g, h, j)`, rows
/// `(g, h, k, i)` over non-identity arguments.
pub fn cocycle_matrix(module: &FiniteModule) -> IntMatrix {
    let idx = nontrivial(module);
    let (r, k) = (module.rank(), idx.len());
    let pos = |g: usize| idx.iter().position(|&x| x == g);
    let grp = module.group();
    let col = |a: usize, b: usize| (a * k + b) * r;
    let mut d = IntMatrix::zeros(k * k * k * r, k * k * r);
    for (a, &g) in idx.iter().enumerate() {
        let act = module.action(g);
        for (b, &h) in idx.iter().enumerate() {
            for (c, &l) in idx.iter().enumerate() {
                let row = ((a * k + b) * k + c) * r;
                for i in 0..r {
                    for j in 0..r {
                        d[(row + i, col(b, c) + j)] += act[(i, j)];
                    }
                    if let Some(gh) = pos(grp.mul(g, h)) {
                        d[(row + i, col(gh, c) + i)] -= 1;
                    }
                    if let Some(hl) = pos(grp.mul(h, l)) {
                        d[(row + i, col(a, hl) + i)] += 1;
                    }
                    d[(row + i, col(a, b) + i)] -= 1;
                }
            }
        }
    }
    d
}

/// Invariant factors of `H²(F; M)` (empty when trivial). Everything is
/// lifted to `ℤ^d` and computed modulo the exponent `N` of `M`: with `Z̃` the
/// lift of the cocycles and `B̃` the lift of the coboundaries plus the
/// relations of `M`, both contain `Nℤ^d` and `H² ≅ Z̃ / B̃`.
pub fn h2(module: &FiniteModule) -> Result<Vec<i64>, CohomologyError> {
    let (order, rank) = (module.group().order(), module.rank());
    if order > MAX_GROUP_ORDER || rank > MAX_MODULE_RANK {
        return Err(CohomologyError::SizeLimit { order, rank });
    }
    if order == 1 || rank == 0 {
        return Ok(Vec::new());
    }
    let n = module.exponent();
    let k = order - 1;
    let d2 = k * k * rank;
    let factor_of = |coord: usize| module.factors()[coord % rank];

    // cocycles: (δ²x)ᵢ ≡ 0 mod kᵢ, i.e. (N/kᵢ)(δ²x)ᵢ ≡ 0 mod N
    let mut cocycle = cocycle_matrix(module);
    for row in 0..cocycle.rows() {
        let s = n / factor_of(row);
        for c in 0..cocycle.cols() {
            cocycle[(row, c)] = (cocycle[(row, c)] * s).rem_euclid(n);
        }
    }
    let z_basis = hnf_mod(&kernel_mod(&cocycle, n), d2, n);

    let delta = coboundary_matrix(module);
    let mut relations: Vec<Vec<i64>> = (0..delta.cols()).map(|c| delta.column(c)).collect();
    relations.extend((0..d2).map(|c| {
        let mut v = vec![0; d2];
        v[c] = factor_of(c);
        v
    }));
    let w_basis = hnf_mod(&relations, d2, n);

    // coordinates of the relations in the triangular cocycle basis
    let coefficients: Vec<Vec<i64>> = w_basis
        .iter()
        .map(|w| {
            let mut rest: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
            let mut c = vec![0i64; d2];
            for (i, h) in z_basis.iter().enumerate() {
                if rest[i].is_zero() {
                    continue;
                }
                let pivot = BigInt::from(h[i]);
                let (q, r) = rest[i].div_rem(&pivot);
                assert!(r.is_zero(), "relation outside the cocycle lattice");
                for (x, &y) in rest.iter_mut().zip(h).skip(i) {
                    *x -= &q * y;
                }
                c[i] = q.mod_floor(&BigInt::from(n)).to_i64().expect("reduced mod N");
            }
            c
        })
        .collect();
    Ok(quotient_invariants_mod(&coefficients, d2, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{coboundary, is_cocycle, CochainTable};
    use crate::finite::FiniteGroup;

    fn trivial(n: usize, factors: Vec<i64>) -> FiniteModule {
        FiniteModule::trivial(FiniteGroup::cyclic(n), factors).unwrap()
    }

    #[test]
    fn small_cases() {
        assert_eq!(h2(&trivial(2, vec![2])).unwrap(), vec![2]);
        assert!(h2(&trivial(2, vec![3])).unwrap().is_empty());
        assert_eq!(h2(&trivial(3, vec![3])).unwrap(), vec![3]);
        assert_eq!(h2(&trivial(4, vec![6])).unwrap(), vec![2]);
        let klein = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        // Hom(ℤ₂, ℤ₂) ⊕ Ext(ℤ₂², ℤ₂)
        assert_eq!(h2(&FiniteModule::trivial(klein, vec![2]).unwrap()).unwrap(), vec![2, 2, 2]);
    }

    #[test]
    fn sign_action() {
        // H²(ℤ₂; ℤ₄⁻) = ker(1+σ) / ... = M^F / N·M = {0,2} / 0
        let m = FiniteModule::from_generators(FiniteGroup::cyclic(2), vec![4], &[(1, IntMatrix::from_rows(&[[-1]]))]).unwrap();
        assert_eq!(h2(&m).unwrap(), vec![2]);
    }

    #[test]
    fn matrices_compose_to_zero() {
        let m = FiniteModule::from_generators(
            FiniteGroup::cyclic(4),
            vec![3, 3],
            &[(1, IntMatrix::from_rows(&[[0, -1], [1, 0]]))],
        )
        .unwrap();
        let prod = cocycle_matrix(&m).mul(&coboundary_matrix(&m));
        assert!((0..prod.rows()).all(|i| prod.row(i).iter().all(|x| x % 3 == 0)));
        let a = CochainTable::new(&m, 1, vec![vec![0, 0], vec![1, 2], vec![0, 1], vec![2, 2]]).unwrap();
        assert!(is_cocycle(&m, &coboundary(&m, &a).unwrap()));
    }

    #[test]
    fn size_limit() {
        let m = trivial(13, vec![2]);
        assert_eq!(h2(&m), Err(CohomologyError::SizeLimit { order: 13, rank: 1 }));
    }
}
