//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use hyperlab_core::cohomology::FiniteModule;
use hyperlab_core::linalg::{IntMatrix, Q};
use hyperlab_core::{Element, IntegerRep, LieAlgebraData};
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;

/// `max(max_a min_b d, max_b min_a d)` by the definition.
pub fn brute_hausdorff(a: &[Element], b: &[Element]) -> f64 {
    let directed = |x: &[Element], y: &[Element]| {
        x.iter().map(|p| y.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Rank over ℚ of a list of vectors, by fraction-free elimination.
pub fn rational_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = &rows[r][c] / &pivot;
                let sub: Vec<Q> = rows[rank].iter().map(|x| x * &factor).collect();
                for (x, y) in rows[r].iter_mut().zip(sub) {
                    *x -= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of `[𝔤, 𝔤]`: the rank of all brackets of basis vectors.
pub fn derived_dimension(l: &LieAlgebraData) -> usize {
    let c = l.structure_constants();
    let n = l.dim();
    let rows = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| c[i][j].clone()).collect();
    rational_rank(rows)
}

/// `¼‖ad x‖²_HS` minimized over random unit vectors of an orthonormal-gram
/// algebra, with the norm taken entrywise.
pub fn sphere_ricci_min<R: Rng>(l: &LieAlgebraData, samples: usize, rng: &mut R) -> f64 {
    let n = l.dim();
    let c: Vec<Vec<Vec<f64>>> = l
        .structure_constants()
        .iter()
        .map(|r| r.iter().map(|v| v.iter().map(hyperlab_core::linalg::q_to_f64).collect()).collect())
        .collect();
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        x.iter_mut().for_each(|v| *v /= norm);
        // (ad x)_{kj} = Σ_i x_i c[i][j][k]
        let mut hs = 0.0;
        for j in 0..n {
            for k in 0..n {
                let e: f64 = (0..n).map(|i| x[i] * c[i][j][k]).sum();
                hs += e * e;
            }
        }
        best = best.min(hs / 4.0);
    }
    best
}

/// Reducibility of a rank-2 integral representation: a common rational
/// eigenvector of all matrices.
pub fn reducible_by_eigenvectors(rep: &IntegerRep) -> bool {
    assert_eq!(rep.dim(), 2);
    let mats: Vec<[[i64; 2]; 2]> =
        rep.matrices().iter().map(|m| [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]).collect();
    let Some(a) = mats.iter().find(|m| m[0][1] != 0 || m[1][0] != 0 || m[0][0] != m[1][1]) else {
        return true;
    };
    let (tr, det) = (a[0][0] + a[1][1], a[0][0] * a[1][1] - a[0][1] * a[1][0]);
    let disc = tr * tr - 4 * det;
    if disc < 0 {
        return false;
    }
    let root = num_integer::Roots::sqrt(&disc);
    if root * root != disc {
        return false;
    }
    // eigenvalues (tr ± root)/2 scaled by 2; eigenvector of 2A − μ
    let mut candidates = Vec::new();
    for mu in [tr + root, tr - root] {
        let b = [[2 * a[0][0] - mu, 2 * a[0][1]], [2 * a[1][0], 2 * a[1][1] - mu]];
        let v = if b[0] != [0, 0] { [-b[0][1], b[0][0]] } else { [-b[1][1], b[1][0]] };
        candidates.push(v);
    }
    candidates.iter().any(|v| {
        mats.iter().all(|m| {
            let w = [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
            w[0] * v[1] - w[1] * v[0] == 0
        })
    })
}

/// `|A[d]|` for `A ≅ ⊕ ℤ_{aᵢ}`.
pub fn torsion_count(invariants: &[i64], d: i64) -> u64 {
    invariants.iter().map(|&a| a.gcd(&d) as u64).product()
}

pub fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `(d, |H²(F; M)[d]|)` for every `d | exp(M)`, by enumeration. Normalized
/// 2-cocycles are determined by their values `f(x, s)` on generators `s`
/// through `f(g, hs) = f(g, h) + f(gh, s) − g·f(h, s)`; every assignment of
/// those values is extended and the cocycle identity checked in full.
/// Coboundaries are enumerated from all normalized 1-cochains.
pub fn h2_by_enumeration(module: &FiniteModule) -> Vec<(i64, u64)> {
    let grp = module.group();
    let n = grp.order();
    let e = grp.identity();
    let elems = module.elements();
    let size = elems.len();
    let index = |v: &[i64]| elems.iter().position(|x| x.as_slice() == v).expect("reduced element");
    let add: Vec<Vec<u8>> =
        (0..size).map(|a| (0..size).map(|b| index(&module.add(&elems[a], &elems[b])) as u8).collect()).collect();
    let neg: Vec<u8> = (0..size).map(|a| index(&module.sub(&module.zero(), &elems[a])) as u8).collect();
    let act: Vec<Vec<u8>> =
        (0..n).map(|g| (0..size).map(|a| index(&module.act(g, &elems[a])) as u8).collect()).collect();
    let zero = index(&module.zero()) as u8;
    let sub = |a: u8, b: u8| add[a as usize][neg[b as usize] as usize];
    let plus = |a: u8, b: u8| add[a as usize][b as usize];

    let gens = grp.generators();
    // BFS words: h = parent(h)·gens[step(h)]
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut order = vec![e];
    let mut seen = vec![false; n];
    seen[e] = true;
    let mut i = 0;
    while i < order.len() {
        let h = order[i];
        for (j, &s) in gens.iter().enumerate() {
            let hs = grp.mul(h, s);
            if !seen[hs] {
                seen[hs] = true;
                parent[hs] = Some((h, j));
                order.push(hs);
            }
        }
        i += 1;
    }
    let nontrivial: Vec<usize> = (0..n).filter(|&g| g != e).collect();

    let free = nontrivial.len() * gens.len();
    let mut cocycles: Vec<Vec<u8>> = Vec::new();
    let mut digits = vec![0usize; free];
    let mut f = vec![zero; n * n];
    'outer: loop {
        f.iter_mut().for_each(|x| *x = zero);
        let value = |x: usize, j: usize| digits[nontrivial.iter().position(|&y| y == x).unwrap() * gens.len() + j] as u8;
        for &h in order.iter().skip(1) {
            let (p, j) = parent[h].expect("reached");
            for &g in &nontrivial {
                let gp = grp.mul(g, p);
                let f_gp_s = if gp == e { zero } else { value(gp, j) };
                let f_p_s = if p == e { zero } else { value(p, j) };
                let v = if p == e { value(g, j) } else { sub(plus(f[g * n + p], f_gp_s), act[g][f_p_s as usize]) };
                f[g * n + h] = v;
            }
        }
        let consistent = gens.iter().enumerate().all(|(j, &s)| nontrivial.iter().all(|&x| f[x * n + s] == value(x, j)));
        let cocycle = consistent
            && nontrivial.iter().all(|&g| {
                nontrivial.iter().all(|&h| {
                    nontrivial.iter().all(|&k| {
                        let gh = grp.mul(g, h);
                        let hk = grp.mul(h, k);
                        let lhs = plus(act[g][f[h * n + k] as usize], f[g * n + hk]);
                        let rhs = plus(f[gh * n + k], f[g * n + h]);
                        lhs == rhs
                    })
                })
            });
        if cocycle {
            cocycles.push(f.clone());
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < size {
                continue 'outer;
            }
            *d = 0;
        }
        break;
    }

    let mut boundaries: HashSet<Vec<u8>> = HashSet::new();
    let mut a = vec![0usize; nontrivial.len()];
    'cochains: loop {
        let mut full = vec![zero; n];
        for (k, &g) in nontrivial.iter().enumerate() {
            full[g] = a[k] as u8;
        }
        let mut db = vec![zero; n * n];
        for &g in &nontrivial {
            for &h in &nontrivial {
                let gh = grp.mul(g, h);
                db[g * n + h] = plus(sub(act[g][full[h] as usize], full[gh]), full[g]);
            }
        }
        boundaries.insert(db);
        for d in a.iter_mut() {
            *d += 1;
            if *d < size {
                continue 'cochains;
            }
            *d = 0;
        }
        break;
    }

    let b = boundaries.len() as u64;
    let multiple = |d: i64, x: u8| (0..d).fold(zero, |acc, _| plus(acc, x));
    divisors(module.exponent())
        .into_iter()
        .map(|d| {
            let count =
                cocycles.iter().filter(|z| boundaries.contains(&z.iter().map(|&x| multiple(d, x)).collect::<Vec<u8>>())).count()
                    as u64;
            assert_eq!(count % b, 0, "coboundaries form a subgroup");
            (d, count / b)
        })
        .collect()
}

pub fn int(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}
