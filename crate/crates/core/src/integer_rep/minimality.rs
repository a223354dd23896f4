use serde::Serialize;

use super::{glz_conjugate, invariant_lattice_quotient, rational_irreducible, Irreducibility, IntegerRep, RationalLattice, RepError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientCheck {
    pub k: i64,
    /// The representation induced on `G/Ñ`, `Ñ = ((1/k)ℤ)ᵐ/ℤᵐ`, is
    /// GL(m, ℤ)-conjugate to the original.
    pub conjugate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MinimalityVerdict {
    Minimal,
    NotMinimal,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimalityReport {
    pub faithful: bool,
    pub kernel: Vec<String>,
    pub irreducibility: Irreducibility,
    pub quotient_checks: Vec<QuotientCheck>,
    pub verdict: MinimalityVerdict,
}

pub fn minimality_check(rep: &IntegerRep) -> Result<MinimalityReport, RepError> {
    let (faithful, kernel) = rep.is_faithful();
    let kernel = kernel.iter().map(|&g| rep.group().id(g).to_owned()).collect();
    let irreducibility = rational_irreducible(rep);
    let mut quotient_checks = Vec::new();
    for k in [2, 3] {
        let induced = invariant_lattice_quotient(rep, &RationalLattice::scaled(rep.dim(), k))?;
        let conjugate = glz_conjugate(&induced, rep, super::DEFAULT_ENTRY_BOUND)?.is_found();
        quotient_checks.push(QuotientCheck { k, conjugate });
    }
    let verdict = match (&irreducibility, faithful) {
        (_, false) | (Irreducibility::Reducible { .. }, _) => MinimalityVerdict::NotMinimal,
        (Irreducibility::Irreducible, true) if quotient_checks.iter().all(|c| c.conjugate) => MinimalityVerdict::Minimal,
        _ => MinimalityVerdict::Undecided,
    };
    Ok(MinimalityReport { faithful, kernel, irreducibility, quotient_checks, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integer_rep::examples;

    #[test]
    fn corpus_verdicts() {
        for rep in [examples::quarter_turn(), examples::sign(), examples::circle()] {
            let r = minimality_check(&rep).unwrap();
            assert_eq!(r.verdict, MinimalityVerdict::Minimal, "{r:?}");
            assert!(r.quotient_checks.iter().all(|c| c.conjugate));
        }
        for rep in [examples::alpha(), examples::beta()] {
            let r = minimality_check(&rep).unwrap();
            assert_eq!(r.verdict, MinimalityVerdict::NotMinimal);
            assert!(matches!(r.irreducibility, Irreducibility::Reducible { .. }));
        }
    }

    #[test]
    fn unfaithful_is_not_minimal() {
        let rep = IntegerRep::trivial(examples::z2(), 1).unwrap();
        let r = minimality_check(&rep).unwrap();
        assert!(!r.faithful);
        assert_eq!(r.kernel, vec!["1", "-1"]);
        assert_eq!(r.verdict, MinimalityVerdict::NotMinimal);
    }

    #[test]
    fn report_serializes() {
        let json = serde_json::to_string(&minimality_check(&examples::alpha()).unwrap()).unwrap();
        assert!(json.contains("\"Reducible\""));
        assert!(json.contains("\"NotMinimal\""));
    }
}
