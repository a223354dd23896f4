//! Univariate polynomials over ℚ, coefficients stored lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::{q, RatMatrix, Q};

pub type Poly = Vec<Q>;

pub fn degree(p: &[Q]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn monic(p: &[Q]) -> Poly {
    let d = degree(p).expect("zero polynomial has no monic form");
    let lead = p[d].clone();
    p[..=d].iter().map(|c| c / &lead).collect()
}

pub fn eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// Polynomial long division `p = quotient · d + remainder`.
pub fn div_rem(p: &[Q], d: &[Q]) -> (Poly, Poly) {
    let dd = degree(d).expect("division by the zero polynomial");
    let mut rem: Poly = p.to_vec();
    let Some(dp) = degree(p) else { return (vec![Q::zero()], vec![Q::zero()]) };
    if dp < dd {
        return (vec![Q::zero()], trim(rem));
    }
    let mut quot = vec![Q::zero(); dp - dd + 1];
    for k in (0..=dp - dd).rev() {
        let c = &rem[k + dd] / &d[dd];
        if c.is_zero() {
            continue;
        }
        for (i, di) in d[..=dd].iter().enumerate() {
            let v = &c * di;
            rem[k + i] -= v;
        }
        quot[k] = c;
    }
    rem.truncate(dd.max(1));
    (trim(quot), trim(rem))
}

pub fn mul(a: &[Q], b: &[Q]) -> Poly {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Evaluates `p(A)` for a square matrix.
pub fn eval_matrix(p: &[Q], a: &RatMatrix) -> RatMatrix {
    let n = a.rows();
    let mut acc = RatMatrix::zeros(n, n);
    for c in p.iter().rev() {
        acc = acc.mul(a).add(&RatMatrix::identity(n).scale(c));
    }
    acc
}

/// Characteristic polynomial `det(xI − A)` by Faddeev–LeVerrier.
pub fn char_poly(a: &RatMatrix) -> Poly {
    let n = a.rows();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = RatMatrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&RatMatrix::identity(n).scale(&coeffs[n - k + 1]));
        let c = -a.mul(&m).trace() / q(k as i64);
        coeffs[n - k] = c;
    }
    coeffs
}

/// Minimal polynomial of a square matrix via the Krylov sequence of powers.
pub fn minimal_poly(a: &RatMatrix) -> Poly {
    let n = a.rows();
    let flatten = |m: &RatMatrix| -> Vec<Q> { (0..n).flat_map(|i| m.row(i).to_vec()).collect() };
    let mut powers = vec![flatten(&RatMatrix::identity(n))];
    let mut current = RatMatrix::identity(n);
    for k in 1..=n {
        current = current.mul(a);
        let target = flatten(&current);
        // solve Σ c_i A^i = A^k over the previous powers
        let mut sys = RatMatrix::zeros(n * n, k + 1);
        for (col, v) in powers.iter().chain(std::iter::once(&target)).enumerate() {
            for (row, x) in v.iter().enumerate() {
                sys[(row, col)] = x.clone();
            }
        }
        let ns = sys.nullspace();
        if let Some(v) = ns.into_iter().find(|v| !v[k].is_zero()) {
            let lead = v[k].clone();
            return v.iter().map(|c| c / &lead).collect();
        }
        powers.push(target);
    }
    unreachable!("Cayley–Hamilton bounds the minimal polynomial degree by n")
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let Some(small) = n.to_u64() else { return out };
    let mut d = 1u64;
    while d.saturating_mul(d) <= small {
        if small % d == 0 {
            out.push(BigInt::from(d));
            if d != small / d {
                out.push(BigInt::from(small / d));
            }
        }
        d += 1;
    }
    out
}

/// Clears denominators, giving a primitive integer polynomial.
fn integer_primitive(p: &[Q]) -> Vec<BigInt> {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|c| c / &g).collect()
    }
}

/// Rational roots with multiplicity, by the rational root theorem.
pub fn rational_roots(p: &[Q]) -> Vec<Q> {
    let mut roots = Vec::new();
    let mut rest = trim(p.to_vec());
    // roots at zero
    while degree(&rest).is_some_and(|d| d > 0) && rest[0].is_zero() {
        roots.push(Q::zero());
        rest.remove(0);
    }
    if degree(&rest).is_none_or(|d| d == 0) {
        return roots;
    }
    let ints = integer_primitive(&rest);
    let lead = ints.last().cloned().unwrap_or_default();
    let constant = ints[0].clone();
    let mut candidates = Vec::new();
    for num in divisors(&constant) {
        for den in divisors(&lead) {
            let c = Q::new(num.clone(), den.clone());
            candidates.push(c.clone());
            candidates.push(-c);
        }
    }
    candidates.sort();
    candidates.dedup();
    for c in candidates {
        while degree(&rest).is_some_and(|d| d > 0) && eval(&rest, &c).is_zero() {
            roots.push(c.clone());
            rest = div_rem(&rest, &[-c.clone(), Q::one()]).0;
        }
    }
    roots.sort();
    roots
}

/// Factorization of a monic integer polynomial over ℚ into monic factors.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub factors: Vec<Poly>,
    /// False when a factor of degree ≥ 5 was left unsplit.
    pub complete: bool,
}

pub fn factor_over_q(p: &[Q]) -> Factorization {
    let p = monic(p);
    let mut factors: Vec<Poly> = Vec::new();
    let mut rest = p.clone();
    for r in rational_roots(&p) {
        rest = div_rem(&rest, &[-r.clone(), Q::one()]).0;
        factors.push(vec![-r, Q::one()]);
    }
    let mut complete = true;
    match degree(&rest) {
        Some(0) | None => {}
        Some(1..=3) => factors.push(rest),
        Some(4) => match split_quartic(&rest) {
            Some((a, b)) => {
                factors.push(a);
                factors.push(b);
            }
            None => factors.push(rest),
        },
        Some(_) => {
            complete = false;
            factors.push(rest);
        }
    }
    Factorization { factors, complete }
}

/// Splits a monic integer quartic without rational roots into two monic
/// integer quadratics, if possible.
fn split_quartic(p: &[Q]) -> Option<(Poly, Poly)> {
    if p.iter().any(|c| !c.is_integer()) {
        return None;
    }
    let c: Vec<i128> = p.iter().map(|x| x.to_integer().to_i128()).collect::<Option<_>>()?;
    let (a0, a1, a2, a3) = (c[0], c[1], c[2], c[3]);
    let quad = |b: i128, cc: i128| vec![q_i(cc), q_i(b), Q::one()];
    for cc in divisors(&BigInt::from(a0)).iter().filter_map(|d| d.to_i128()).flat_map(|d| [d, -d]) {
        let f = a0 / cc;
        if f != cc {
            let num = a1 - cc * a3;
            if num % (f - cc) != 0 {
                continue;
            }
            let b = num / (f - cc);
            let d = a3 - b;
            if b * d + cc + f == a2 {
                return Some((quad(b, cc), quad(d, f)));
            }
        } else {
            if a1 != cc * a3 {
                continue;
            }
            // b² − a3 b + (a2 − 2c) = 0
            let disc = a3 * a3 - 4 * (a2 - 2 * cc);
            if disc < 0 {
                continue;
            }
            let s = integer_sqrt(disc)?;
            if (a3 + s) % 2 == 0 {
                let b = (a3 + s) / 2;
                return Some((quad(b, cc), quad(a3 - b, f)));
            }
        }
    }
    None
}

fn q_i(x: i128) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn integer_sqrt(n: i128) -> Option<i128> {
    let r = (n as f64).sqrt().round() as i128;
    (r - 1..=r + 1).find(|&s| s >= 0 && s * s == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q_frac;

    fn p(c: &[i64]) -> Poly {
        c.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn char_poly_of_rotation() {
        let a = RatMatrix::from_rows(&[vec![q(0), q(-1)], vec![q(1), q(0)]]);
        assert_eq!(char_poly(&a), p(&[1, 0, 1]));
        assert_eq!(minimal_poly(&a), p(&[1, 0, 1]));
    }

    #[test]
    fn minimal_poly_of_scalar() {
        let a = RatMatrix::identity(3).scale(&q(2));
        assert_eq!(minimal_poly(&a), p(&[-2, 1]));
    }

    #[test]
    fn roots_and_factors() {
        // (x-1)(x+2)(2x-1)
        let poly = mul(&mul(&p(&[-1, 1]), &p(&[2, 1])), &p(&[-1, 2]));
        assert_eq!(rational_roots(&poly), vec![q(-2), q_frac(1, 2), q(1)]);
        // (x²+1)(x²+x+1) has no rational roots but splits
        let quartic = mul(&p(&[1, 0, 1]), &p(&[1, 1, 1]));
        let f = factor_over_q(&quartic);
        assert_eq!(f.factors.len(), 2);
        // x⁴+1 is irreducible over ℚ
        let f = factor_over_q(&p(&[1, 0, 0, 0, 1]));
        assert_eq!(f.factors.len(), 1);
        // (x²+2)² splits with equal constants
        let f = factor_over_q(&mul(&p(&[2, 0, 1]), &p(&[2, 0, 1])));
        assert_eq!(f.factors, vec![p(&[2, 0, 1]), p(&[2, 0, 1])]);
    }
}
