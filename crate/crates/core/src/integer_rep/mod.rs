//! Integer representations `F → GL(m, ℤ)` of finite groups: faithfulness,
//! rational irreducibility, invariant-lattice quotients, GL(m, ℤ)-conjugacy
//! and the minimality report built from them.

mod conjugacy;
mod irreducible;
mod lattice;
mod minimality;

pub use conjugacy::{glz_conjugate, GlzConjugacy, DEFAULT_ENTRY_BOUND};
pub use irreducible::{rational_irreducible, Irreducibility};
pub use lattice::{invariant_lattice_quotient, RationalLattice};
pub use minimality::{minimality_check, MinimalityReport, MinimalityVerdict, QuotientCheck};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite::{FiniteGroup, FiniteGroupError};
use crate::linalg::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Group(#[from] FiniteGroupError),
    #[error("representation dimension must be positive")]
    ZeroDimension,
    #[error("expected {expected} matrices, got {got}")]
    MatrixCount { expected: usize, got: usize },
    #[error("matrix for `{id}` is not {m}×{m}")]
    MatrixShape { id: String, m: usize },
    #[error("matrix for `{id}` has determinant {det}, not ±1")]
    NotUnimodular { id: String, det: i64 },
    #[error("identity element `{0}` is not sent to the identity matrix")]
    IdentityNotFixed(String),
    #[error("not a homomorphism: ρ({a})·ρ({b}) ≠ ρ({a}{b})")]
    NotHomomorphism { a: String, b: String },
    #[error("missing matrix for element `{0}`")]
    MissingMatrix(String),
    #[error("lattice does not contain ℤᵐ")]
    LatticeTooSmall,
    #[error("lattice basis is singular or has the wrong shape")]
    LatticeBasis,
    #[error("lattice is not invariant: ρ({element}) moves basis vector {basis_index} out of the lattice")]
    NotInvariant { element: String, basis_index: usize },
    #[error("representations have different dimensions {0} and {1}")]
    DimensionMismatch(usize, usize),
}

/// A homomorphism from a finite group into `GL(m, ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerRep {
    group: FiniteGroup,
    m: usize,
    matrices: Vec<IntMatrix>,
}

impl IntegerRep {
    /// Validates the homomorphism property exactly.
    pub fn new(group: FiniteGroup, matrices: Vec<IntMatrix>) -> Result<Self, RepError> {
        if matrices.len() != group.order() {
            return Err(RepError::MatrixCount { expected: group.order(), got: matrices.len() });
        }
        let m = matrices[0].rows();
        if m == 0 {
            return Err(RepError::ZeroDimension);
        }
        for (g, a) in matrices.iter().enumerate() {
            if a.rows() != m || a.cols() != m {
                return Err(RepError::MatrixShape { id: group.id(g).to_owned(), m });
            }
            let det = a.det();
            if det.abs() != 1 {
                return Err(RepError::NotUnimodular { id: group.id(g).to_owned(), det });
            }
        }
        if !matrices[group.identity()].is_identity() {
            return Err(RepError::IdentityNotFixed(group.id(group.identity()).to_owned()));
        }
        for a in group.elements() {
            for b in group.elements() {
                if matrices[a].mul(&matrices[b]) != matrices[group.mul(a, b)] {
                    return Err(RepError::NotHomomorphism {
                        a: group.id(a).to_owned(),
                        b: group.id(b).to_owned(),
                    });
                }
            }
        }
        Ok(Self { group, m, matrices })
    }

    /// Builds a representation from generator images, extending along words.
    pub fn from_generators(group: FiniteGroup, images: &[(usize, IntMatrix)]) -> Result<Self, RepError> {
        let m = images.first().map(|(_, a)| a.rows()).ok_or(RepError::ZeroDimension)?;
        let mut mats: Vec<Option<IntMatrix>> = vec![None; group.order()];
        mats[group.identity()] = Some(IntMatrix::identity(m));
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (g, a) in images {
                let y = group.mul(x, *g);
                if mats[y].is_none() {
                    mats[y] = Some(mats[x].as_ref().expect("visited").mul(a));
                    queue.push_back(y);
                }
            }
        }
        let matrices = mats
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| RepError::MissingMatrix(group.id(i).to_owned())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, matrices)
    }

    /// The trivial representation of `group` on ℤᵐ.
    pub fn trivial(group: FiniteGroup, m: usize) -> Result<Self, RepError> {
        let matrices = vec![IntMatrix::identity(m); group.order()];
        Self::new(group, matrices)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn matrix(&self, g: usize) -> &IntMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    /// Conjugates every image by a unimodular `p`: `g ↦ P·ρ(g)·P⁻¹`.
    pub fn conjugated_by(&self, p: &IntMatrix, p_inv: &IntMatrix) -> Result<Self, RepError> {
        let matrices = self.matrices.iter().map(|a| p.mul(a).mul(p_inv)).collect();
        Self::new(self.group.clone(), matrices)
    }

    /// Kernel of the representation and whether it is trivial.
    pub fn is_faithful(&self) -> (bool, Vec<usize>) {
        let kernel: Vec<usize> = self.group.elements().filter(|&g| self.matrices[g].is_identity()).collect();
        (kernel.len() == 1, kernel)
    }
}

/// The canonical example groups: `ℤ₂ = {1, -1}` acting on ℤ² by
/// `diag(1,−1)` and by `[[1,1],[0,−1]]`.
pub mod examples {
    use super::*;

    pub fn z2() -> FiniteGroup {
        FiniteGroup::from_fn(vec!["1".into(), "-1".into()], |a, b| a ^ b).expect("ℤ₂")
    }

    pub fn alpha() -> IntegerRep {
        IntegerRep::from_generators(z2(), &[(1, IntMatrix::from_rows(&[[1, 0], [0, -1]]))]).expect("α")
    }

    pub fn beta() -> IntegerRep {
        IntegerRep::from_generators(z2(), &[(1, IntMatrix::from_rows(&[[1, 1], [0, -1]]))]).expect("β")
    }

    /// ℤ₄ acting on ℤ² by the quarter turn `[[0,−1],[1,0]]`.
    pub fn quarter_turn() -> IntegerRep {
        IntegerRep::from_generators(FiniteGroup::cyclic(4), &[(1, IntMatrix::from_rows(&[[0, -1], [1, 0]]))])
            .expect("ℤ₄ quarter turn")
    }

    /// ℤ₂ acting on ℤ¹ by −1.
    pub fn sign() -> IntegerRep {
        IntegerRep::from_generators(z2(), &[(1, IntMatrix::from_rows(&[[-1]]))]).expect("sign")
    }

    pub fn circle() -> IntegerRep {
        IntegerRep::trivial(FiniteGroup::trivial(), 1).expect("trivial rep")
    }
}
