use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{GroupError, TorusPoint};
use crate::finite::FiniteGroup;
use crate::integer_rep::IntegerRep;
use crate::linalg::{smith_normal_form, IntMatrix};

/// `𝕋ᵐ ⋊_α F` with law `(t₁, g₁)(t₂, g₂) = (t₁ + α(g₁)t₂, g₁g₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectGroup {
    m: usize,
    rep: IntegerRep,
}

pub fn build_semidirect(m: usize, rep: IntegerRep) -> Result<SemidirectGroup, GroupError> {
    if m == 0 {
        return Err(GroupError::ZeroDimension);
    }
    if rep.dim() != m {
        return Err(GroupError::Descriptor(format!("action has dimension {}, torus has {m}", rep.dim())));
    }
    // re-validate; IntegerRep values can be deserialized without checks
    let rep = IntegerRep::new(rep.group().clone(), rep.matrices().to_vec())?;
    Ok(SemidirectGroup { m, rep })
}

impl SemidirectGroup {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn rep(&self) -> &IntegerRep {
        &self.rep
    }

    pub fn quotient(&self) -> &FiniteGroup {
        self.rep.group()
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        self.rep.matrix(g)
    }

    pub fn identity(&self) -> (TorusPoint, usize) {
        (TorusPoint::zero(self.m), self.quotient().identity())
    }

    pub fn multiply(&self, a: &(TorusPoint, usize), b: &(TorusPoint, usize)) -> (TorusPoint, usize) {
        (a.0.add(&b.0.act(self.action(a.1))), self.quotient().mul(a.1, b.1))
    }

    /// `(t, g)⁻¹ = (−α(g⁻¹)t, g⁻¹)`.
    pub fn invert(&self, a: &(TorusPoint, usize)) -> (TorusPoint, usize) {
        let gi = self.quotient().inv(a.1);
        (a.0.act(self.action(gi)).neg(), gi)
    }

    /// Elements of `(Cₙ)ᵐ ⋊ F`: torus coordinates in `(1/n)ℤ`.
    pub fn grid_elements(&self, n: i64) -> Vec<(TorusPoint, usize)> {
        let pts = torus_grid(self.m, n);
        self.quotient().elements().flat_map(|g| pts.iter().map(move |t| (t.clone(), g))).collect()
    }

    /// Largest Frobenius norm of an action matrix; bounds the Lipschitz
    /// constant of every `α(g)` on the torus.
    pub fn action_norm(&self) -> f64 {
        self.rep.matrices().iter().map(IntMatrix::frobenius_norm).fold(1.0, f64::max)
    }
}

/// All points of `((1/n)ℤ)ᵐ/ℤᵐ` in lexicographic order.
pub fn torus_grid(m: usize, n: i64) -> Vec<TorusPoint> {
    assert!(n >= 1);
    let total = (n as usize).pow(m as u32);
    (0..total)
        .map(|mut idx| {
            let mut ks = vec![0i64; m];
            for k in ks.iter_mut().rev() {
                *k = (idx % n as usize) as i64;
                idx /= n as usize;
            }
            TorusPoint::new(ks.iter().map(|&k| Rational64::new(k, n)).collect())
        })
        .collect()
}

/// Dimension and number of connected components of the center of a
/// semidirect product with faithful action, i.e. of
/// `Fix(α) = {x ∈ 𝕋ᵐ : (α(g) − I)x ∈ ℤᵐ for all g}`.
pub fn center_components(g: &SemidirectGroup) -> Result<(usize, i64), GroupError> {
    let (faithful, kernel) = g.rep.is_faithful();
    if !faithful {
        return Err(GroupError::NotFaithful(kernel.len()));
    }
    let blocks: Vec<IntMatrix> =
        g.rep.matrices().iter().map(|a| a.sub(&IntMatrix::identity(g.m))).collect();
    let snf = smith_normal_form(&IntMatrix::vstack(&blocks));
    let rank = snf.rank();
    let components = snf.diagonal.iter().filter(|&&d| d != 0).map(|d| d.abs()).product();
    Ok((g.m - rank, components))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integer_rep::examples;

    #[test]
    fn example_centers() {
        let ga = build_semidirect(2, examples::alpha()).unwrap();
        let gb = build_semidirect(2, examples::beta()).unwrap();
        assert_eq!(center_components(&ga).unwrap(), (1, 2));
        assert_eq!(center_components(&gb).unwrap(), (1, 1));
        let circle = build_semidirect(1, examples::circle()).unwrap();
        assert_eq!(center_components(&circle).unwrap(), (1, 1));
    }

    #[test]
    fn center_is_invariant_under_change_of_basis() {
        let p = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
        let p_inv = IntMatrix::from_rows(&[[1, -1], [-1, 2]]);
        for rep in [examples::alpha(), examples::beta(), examples::quarter_turn()] {
            let base = center_components(&build_semidirect(2, rep.clone()).unwrap()).unwrap();
            let moved = rep.conjugated_by(&p, &p_inv).unwrap();
            assert_eq!(center_components(&build_semidirect(2, moved).unwrap()).unwrap(), base);
        }
    }

    #[test]
    fn rejects_unfaithful_and_bad_dimension() {
        let trivial = IntegerRep::trivial(examples::z2(), 1).unwrap();
        let g = build_semidirect(1, trivial).unwrap();
        assert!(matches!(center_components(&g), Err(GroupError::NotFaithful(2))));
        assert!(build_semidirect(0, examples::circle()).is_err());
        assert!(build_semidirect(3, examples::alpha()).is_err());
    }

    #[test]
    fn group_law_is_exact() {
        let g = build_semidirect(2, examples::beta()).unwrap();
        let elems = g.grid_elements(3);
        assert_eq!(elems.len(), 18);
        for a in elems.iter().step_by(5) {
            assert_eq!(g.multiply(a, &g.invert(a)), g.identity());
            for b in elems.iter().step_by(3) {
                for c in elems.iter().step_by(7) {
                    assert_eq!(g.multiply(&g.multiply(a, b), c), g.multiply(a, &g.multiply(b, c)));
                }
            }
        }
    }
}
