//! Isolation of compact subgroups: the intrinsic verdict, approximating
//! sequences of finite-by-grid subgroups, conjugacy search and the finite
//! subgroup gap of SO(3).

mod nelder_mead;
mod search;
mod turing;

pub use nelder_mead::{nelder_mead, NelderMeadResult};
pub use search::{conjugacy_search, ConjugacySearchResult, SearchConfig};
pub use turing::{standard_candidates, turing_gap, CandidateGap, TuringCandidate, TuringGapReport};

use serde::Serialize;

use crate::group::{GroupError, SamplableGroup, SubgroupHandle};
use crate::hyperspace::{converging_sequence_report, SequenceReport};
use crate::lie::{derived_subalgebra, is_perfect, LieAlgebraData, LieError, Subalgebra};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum IsolationReason {
    PerfectIdentityComponent,
    NonPerfect { witness: Subalgebra, codimension: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsolationVerdict {
    pub isolated: bool,
    pub reason: IsolationReason,
}

/// `K` is isolated up to conjugacy iff its identity component is perfect;
/// only the Lie algebra of `K°` is consulted.
pub fn isolation_verdict(l: &LieAlgebraData) -> Result<IsolationVerdict, LieError> {
    if is_perfect(l)? {
        return Ok(IsolationVerdict { isolated: true, reason: IsolationReason::PerfectIdentityComponent });
    }
    let witness = derived_subalgebra(l);
    let codimension = l.dim() - witness.dim;
    Ok(IsolationVerdict { isolated: false, reason: IsolationReason::NonPerfect { witness, codimension } })
}

/// The subgroups `(Cₙ)ᵐ ⋊ F` of a torus or torus-by-finite group.
pub fn approximation_sequence(g: &SamplableGroup, ns: &[i64]) -> Result<Vec<SubgroupHandle>, GroupError> {
    if !matches!(g, SamplableGroup::Torus(_) | SamplableGroup::Semidirect(_)) {
        return Err(GroupError::Unsupported(format!("grid approximation of {}", g.name())));
    }
    ns.iter()
        .map(|&n| {
            if n < 1 {
                Err(GroupError::Unsupported(format!("grid order {n}")))
            } else {
                Ok(SubgroupHandle::cyclic_grid(g.clone(), n))
            }
        })
        .collect()
}

/// Hausdorff estimates from each `(Cₙ)ᵐ ⋊ F` to an ε-net of the whole group.
pub fn approximation_report(g: &SamplableGroup, ns: &[i64], eps: f64) -> Result<SequenceReport, GroupError> {
    let handles = approximation_sequence(g, ns)?;
    let samples = handles.iter().map(|h| h.sample(eps)).collect::<Result<Vec<_>, _>>()?;
    let full = g.eps_net(eps)?;
    Ok(converging_sequence_report(&samples, Some(ns), &full))
}
