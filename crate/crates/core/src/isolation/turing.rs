use serde::Serialize;

use crate::group::rotation::finite;
use crate::group::{Element, ExpGrid, GroupError, Realization, Rotation, RotationKind, SamplableGroup, SubgroupHandle};

/// A finite subgroup of SO(3) given by its elements.
#[derive(Clone, Debug)]
pub struct TuringCandidate {
    pub name: String,
    pub elements: Vec<Rotation>,
}

impl TuringCandidate {
    pub fn from_handle(name: &str, h: &SubgroupHandle) -> Result<Self, GroupError> {
        match (&h.parent, &h.realization) {
            (SamplableGroup::So3, Realization::Finite(elems)) => {
                let elements = elems
                    .iter()
                    .map(|x| match x {
                        Element::Rotation(r) => Ok(*r),
                        _ => Err(GroupError::ForeignElement("SO3".into())),
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Self { name: name.to_owned(), elements })
            }
            _ => Err(GroupError::Unsupported("candidates must be explicit finite subgroups of SO3".into())),
        }
    }
}

/// Cyclic groups of order ≤ 60, dihedral groups of order ≤ 60 and the
/// tetrahedral, octahedral and icosahedral groups.
pub fn standard_candidates() -> Vec<TuringCandidate> {
    let mut out: Vec<TuringCandidate> =
        (1..=60).map(|n| TuringCandidate { name: format!("C{n}"), elements: finite::cyclic(n) }).collect();
    out.extend((1..=30).map(|n| TuringCandidate { name: format!("D{n}"), elements: finite::dihedral(n) }));
    out.push(TuringCandidate { name: "T".into(), elements: finite::tetrahedral() });
    out.push(TuringCandidate { name: "O".into(), elements: finite::octahedral() });
    out.push(TuringCandidate { name: "I".into(), elements: finite::icosahedral() });
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateGap {
    pub name: String,
    pub order: usize,
    /// Largest net-to-subgroup distance found; a lower bound on `d_H`.
    pub estimate: f64,
    /// Whether the estimate comes from the fine net (pruned candidates keep
    /// their coarse value).
    pub fine: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TuringGapReport {
    pub min_gap: f64,
    pub error_bound: f64,
    pub argmin: String,
    pub net_mesh: f64,
    pub net_points: usize,
    pub candidates: Vec<CandidateGap>,
}

impl TuringGapReport {
    pub fn lower_bound(&self) -> f64 {
        self.min_gap - self.error_bound
    }
}

const COARSE_MESH: f64 = 0.15;

/// For every candidate, the largest squared distance from a net point to the
/// candidate, over the net of `ExpGrid` spacing `h`. Uses
/// `‖R − F‖² = 6 − 2 tr(FᵀR)`.
fn sweep(candidates: &[&TuringCandidate], h: f64) -> (Vec<f64>, usize) {
    let grid = ExpGrid::covering(RotationKind::So3, h);
    let flat: Vec<Vec<[f64; 9]>> = candidates.iter().map(|c| c.elements.iter().map(|r| r.0).collect()).collect();
    let (worst, count) = grid.par_fold(
        (vec![0.0f64; candidates.len()], 0usize),
        |(mut worst, count), v| {
            let r = Rotation::exp(v).0;
            for (w, elems) in worst.iter_mut().zip(&flat) {
                let best_tr = elems
                    .iter()
                    .map(|f| f.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max);
                *w = w.max(6.0 - 2.0 * best_tr);
            }
            (worst, count + 1)
        },
        |(a, n), (b, m)| (a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(), n + m),
    );
    (worst.into_iter().map(|d2| d2.max(0.0).sqrt()).collect(), count)
}

fn spacing_for(mesh: f64) -> f64 {
    mesh / (RotationKind::So3.chart_lipschitz() * 3f64.sqrt() / 2.0)
}

/// `min_F d_H(F, SO(3))` over the candidates, on a streamed exponential net
/// of mesh `≤ mesh`. A coarse pass discards candidates whose coarse value
/// already exceeds the best coarse upper bound; only the rest are measured
/// on the fine net. Every estimate is a lower bound on the true distance and
/// exceeds it by at most `error_bound`.
pub fn turing_gap(candidates: &[TuringCandidate], mesh: f64) -> Result<TuringGapReport, GroupError> {
    if !(mesh > 0.0) {
        return Err(GroupError::NonPositiveEpsilon(mesh));
    }
    if candidates.is_empty() {
        return Err(GroupError::Unsupported("empty candidate list".into()));
    }
    let fine_h = spacing_for(mesh);
    let all: Vec<&TuringCandidate> = candidates.iter().collect();
    let (survivors, mut gaps): (Vec<usize>, Vec<CandidateGap>) = if mesh < COARSE_MESH {
        let coarse_grid = ExpGrid::covering(RotationKind::So3, spacing_for(COARSE_MESH));
        let (coarse, _) = sweep(&all, coarse_grid.spacing);
        let cutoff = coarse.iter().fold(f64::INFINITY, |a, &b| a.min(b)) + coarse_grid.mesh();
        let gaps = candidates
            .iter()
            .zip(&coarse)
            .map(|(c, &g)| CandidateGap { name: c.name.clone(), order: c.elements.len(), estimate: g, fine: false })
            .collect();
        ((0..candidates.len()).filter(|&i| coarse[i] <= cutoff).collect(), gaps)
    } else {
        let gaps = candidates
            .iter()
            .map(|c| CandidateGap { name: c.name.clone(), order: c.elements.len(), estimate: 0.0, fine: false })
            .collect();
        ((0..candidates.len()).collect(), gaps)
    };
    let chosen: Vec<&TuringCandidate> = survivors.iter().map(|&i| &candidates[i]).collect();
    let (fine, net_points) = sweep(&chosen, fine_h);
    for (&i, &g) in survivors.iter().zip(&fine) {
        gaps[i].estimate = g;
        gaps[i].fine = true;
    }
    let (best, _) = survivors
        .iter()
        .map(|&i| (i, gaps[i].estimate))
        .fold((usize::MAX, f64::INFINITY), |acc, (i, g)| if g < acc.1 { (i, g) } else { acc });
    Ok(TuringGapReport {
        min_gap: gaps[best].estimate,
        error_bound: ExpGrid::covering(RotationKind::So3, fine_h).mesh(),
        argmin: gaps[best].name.clone(),
        net_mesh: ExpGrid::covering(RotationKind::So3, fine_h).mesh(),
        net_points,
        candidates: gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn only(name: &str) -> Vec<TuringCandidate> {
        standard_candidates().into_iter().filter(|c| c.name == name).collect()
    }

    #[test]
    fn trivial_subgroup_gap_is_the_diameter() {
        let r = turing_gap(&only("C1"), 0.2).unwrap();
        // farthest rotations from the identity are the half turns, at 2√2
        assert!((r.min_gap - 2.0 * 2f64.sqrt()).abs() <= r.error_bound);
    }

    #[test]
    fn two_point_gap_is_large() {
        let r = turing_gap(&only("C2"), 0.2).unwrap();
        assert!(r.lower_bound() > 1.0, "{r:?}");
    }

    #[test]
    fn standard_orders() {
        let c = standard_candidates();
        assert_eq!(c.len(), 93);
        assert!(c.iter().all(|x| x.elements.len() <= 60));
        let h = SubgroupHandle::finite(SamplableGroup::So3, finite::octahedral().into_iter().map(Element::Rotation).collect());
        assert_eq!(TuringCandidate::from_handle("O", &h).unwrap().elements.len(), 24);
    }

    #[test]
    fn coarse_run_prefers_large_groups() {
        let r = turing_gap(&standard_candidates(), 0.1).unwrap();
        assert!(r.lower_bound() > 0.0);
        assert!(["I", "O"].contains(&r.argmin.as_str()) || r.argmin.starts_with('D'), "{}", r.argmin);
    }
}
