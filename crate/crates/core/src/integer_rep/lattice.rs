use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{IntegerRep, RepError};
use crate::linalg::{cokernel_invariants, hnf_mod, q, q_frac, serialize_q_rows, RatMatrix, Q};

/// A lattice `ℤᵐ ⊆ Λ ⊆ ℚᵐ` given by basis rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalLattice {
    #[serde(serialize_with = "serialize_basis")]
    basis: RatMatrix,
    /// Invariant factors of `Λ/ℤᵐ`.
    index_data: Vec<i64>,
}

fn serialize_basis<S: serde::Serializer>(b: &RatMatrix, s: S) -> Result<S::Ok, S::Error> {
    serialize_q_rows(&b.to_rows(), s)
}

impl RationalLattice {
    pub fn new(basis: RatMatrix) -> Result<Self, RepError> {
        if basis.rows() != basis.cols() || basis.rows() == 0 {
            return Err(RepError::LatticeBasis);
        }
        // columns of C are the basis vectors; ℤᵐ ⊆ Λ iff C⁻¹ is integral
        let c = basis.transpose();
        let c_inv = c.inverse().ok_or(RepError::LatticeBasis)?;
        let c_inv_int = c_inv.to_int().ok_or(RepError::LatticeTooSmall)?;
        let index_data = cokernel_invariants(&c_inv_int);
        Ok(Self { basis, index_data })
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Result<Self, RepError> {
        Self::new(RatMatrix::from_rows(rows))
    }

    /// `ℤᵐ`.
    pub fn integer(m: usize) -> Self {
        Self::new(RatMatrix::identity(m)).expect("ℤᵐ")
    }

    /// `((1/k)ℤ)ᵐ`.
    pub fn scaled(m: usize, k: i64) -> Self {
        Self::new(RatMatrix::identity(m).scale(&q_frac(1, k))).expect("(1/k)ℤᵐ")
    }

    /// `ℤᵐ + Σ ℤ·v` for rational vectors `v`.
    pub fn generated_by(m: usize, extra: &[Vec<Q>]) -> Result<Self, RepError> {
        let den = extra.iter().flatten().fold(BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let n = den.to_i64().ok_or(RepError::LatticeBasis)?;
        let gens: Vec<Vec<i64>> = extra
            .iter()
            .map(|v| {
                if v.len() != m {
                    return Err(RepError::LatticeBasis);
                }
                v.iter().map(|x| (x * q(n)).to_integer().to_i64().ok_or(RepError::LatticeBasis)).collect()
            })
            .collect::<Result<_, _>>()?;
        // basis of nΛ = span(n·v) + nℤᵐ, then divide by n
        let h = hnf_mod(&gens, m, n);
        let rows: Vec<Vec<Q>> = h.iter().map(|r| r.iter().map(|&x| q_frac(x, n)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn index_data(&self) -> &[i64] {
        &self.index_data
    }

    /// `[Λ : ℤᵐ]`.
    pub fn index(&self) -> i64 {
        self.index_data.iter().product()
    }

    /// The change-of-basis matrix `C` whose columns are the basis vectors.
    pub fn column_matrix(&self) -> RatMatrix {
        self.basis.transpose()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let c_inv = self.column_matrix().inverse().expect("nonsingular basis");
        c_inv.mul_vec(v).iter().all(|x| x.is_integer())
    }

    /// The lattice `Λ'` for which quotienting the induced representation
    /// by `Λ'` recovers the original one exactly: columns `C⁻¹/N`, where `N`
    /// is the common denominator of `C`.
    pub fn inverse_scaled(&self) -> Self {
        let c = self.column_matrix();
        let n = Q::from_integer(c.common_denominator());
        let c_prime = c.inverse().expect("nonsingular basis").scale(&(Q::from_integer(1.into()) / n));
        Self::new(c_prime.transpose()).expect("N·C is integral")
    }
}

/// The representation induced on `Λ/ℤᵐ`-quotient coordinates:
/// `g ↦ C⁻¹·ρ(g)·C`, with `C` the column basis of `Λ`.
pub fn invariant_lattice_quotient(rep: &IntegerRep, lattice: &RationalLattice) -> Result<IntegerRep, RepError> {
    if lattice.dim() != rep.dim() {
        return Err(RepError::DimensionMismatch(rep.dim(), lattice.dim()));
    }
    let c = lattice.column_matrix();
    let c_inv = c.inverse().expect("validated lattice");
    let mut matrices = Vec::with_capacity(rep.group().order());
    for g in rep.group().elements() {
        let induced = c_inv.mul(&RatMatrix::from_int(rep.matrix(g))).mul(&c);
        match induced.to_int() {
            Some(a) => matrices.push(a),
            None => {
                let basis_index = (0..rep.dim())
                    .find(|&j| induced.column(j).iter().any(|x| !x.is_integer()))
                    .unwrap_or_default();
                return Err(RepError::NotInvariant { element: rep.group().id(g).to_owned(), basis_index });
            }
        }
    }
    debug_assert!(matrices.iter().all(|a| !a.det().is_zero()));
    IntegerRep::new(rep.group().clone(), matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integer_rep::examples;
    use crate::linalg::IntMatrix;

    fn half_diagonal() -> RationalLattice {
        RationalLattice::from_rows(&[vec![q(1), q(0)], vec![q_frac(1, 2), q_frac(1, 2)]]).unwrap()
    }

    #[test]
    fn alpha_lattice_induces_beta() {
        let lat = half_diagonal();
        assert_eq!(lat.index_data(), &[2]);
        let induced = invariant_lattice_quotient(&examples::alpha(), &lat).unwrap();
        assert_eq!(induced.matrix(1), &IntMatrix::from_rows(&[[1, 1], [0, -1]]));
        assert_eq!(induced.matrices(), examples::beta().matrices());
    }

    #[test]
    fn beta_lattice_induces_a_conjugate_of_alpha() {
        let lat = RationalLattice::from_rows(&[vec![q_frac(1, 2), q(0)], vec![q(0), q(1)]]).unwrap();
        let induced = invariant_lattice_quotient(&examples::beta(), &lat).unwrap();
        let m = IntMatrix::from_rows(&[[1, 2], [0, -1]]);
        assert_eq!(induced.matrix(1), &m);
        let p = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        let p_inv = IntMatrix::from_rows(&[[1, -1], [0, 1]]);
        assert_eq!(p.mul(&m).mul(&p_inv), IntMatrix::diag(&[1, -1]));
    }

    #[test]
    fn generated_lattice_matches_explicit_basis() {
        let lat = RationalLattice::generated_by(2, &[vec![q_frac(1, 2), q_frac(1, 2)]]).unwrap();
        assert_eq!(lat.index(), 2);
        assert!(lat.contains(&[q_frac(1, 2), q_frac(1, 2)]));
        assert!(!lat.contains(&[q_frac(1, 2), q(0)]));
        assert!(half_diagonal().contains(&lat.basis().row(0).to_vec()));
    }

    #[test]
    fn integer_lattice_is_neutral_and_round_trip_is_exact() {
        let rep = examples::quarter_turn();
        let same = invariant_lattice_quotient(&rep, &RationalLattice::integer(2)).unwrap();
        assert_eq!(same, rep);
        let lat = half_diagonal();
        let there = invariant_lattice_quotient(&examples::alpha(), &lat).unwrap();
        let back = invariant_lattice_quotient(&there, &lat.inverse_scaled()).unwrap();
        assert_eq!(back, examples::alpha());
    }

    #[test]
    fn rejects_non_invariant_and_small_lattices() {
        let lat = RationalLattice::from_rows(&[vec![q_frac(1, 2), q(0)], vec![q(0), q(1)]]).unwrap();
        let err = invariant_lattice_quotient(&examples::quarter_turn(), &lat).unwrap_err();
        assert!(matches!(err, RepError::NotInvariant { .. }));
        let small = RationalLattice::from_rows(&[vec![q(2), q(0)], vec![q(0), q(1)]]);
        assert_eq!(small.unwrap_err(), RepError::LatticeTooSmall);
        assert_eq!(RationalLattice::scaled(3, 2).index_data(), &[2, 2, 2]);
    }
}
