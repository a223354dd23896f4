//! Hausdorff distance between sampled compact sets and membership in basic
//! Vietoris neighbourhoods `𝒱(U₀, …, Uₙ) = {K : K ⊆ U₀, K ∩ Uᵢ ≠ ∅}`.

use std::io;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::Element;

/// Finite samples of a compact set with a certified covering radius.
#[derive(Clone, Debug)]
pub struct SampleSet {
    points: Vec<Element>,
    mesh: f64,
}

impl SampleSet {
    /// Panics on an empty point list or a negative mesh.
    pub fn new(points: Vec<Element>, mesh: f64) -> Self {
        assert!(!points.is_empty(), "sample set must be nonempty");
        assert!(mesh >= 0.0, "mesh must be nonnegative");
        Self { points, mesh }
    }

    /// The set is exactly `points`.
    pub fn exact(points: Vec<Element>) -> Self {
        Self::new(points, 0.0)
    }

    pub fn points(&self) -> &[Element] {
        &self.points
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distance_to(&self, x: &Element) -> f64 {
        self.points.iter().map(|p| p.distance(x)).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HausdorffEstimate {
    pub estimate: f64,
    /// The true distance of the represented sets lies in
    /// `estimate ± error_bound`.
    pub error_bound: f64,
}

/// `max_{a∈A} min_{b∈B} d(a, b)`. The scan over `B` for a point stops once
/// that point is known not to raise the running maximum, and starts where
/// the previous point found its nearest neighbour.
pub fn directed_hausdorff(a: &SampleSet, b: &SampleSet) -> f64 {
    let targets = &b.points;
    let n = targets.len();
    a.points
        .par_chunks(1024)
        .map(|chunk| {
            let (mut cmax, mut start) = (0.0f64, 0usize);
            for x in chunk {
                let (mut cmin, mut best) = (f64::INFINITY, start);
                for step in 0..n {
                    let j = (start + step) % n;
                    let d = x.distance(&targets[j]);
                    if d < cmin {
                        (cmin, best) = (d, j);
                        if cmin <= cmax {
                            break;
                        }
                    }
                }
                start = best;
                cmax = cmax.max(cmin);
            }
            cmax
        })
        .reduce(|| 0.0, f64::max)
}

pub fn hausdorff_distance(a: &SampleSet, b: &SampleSet) -> HausdorffEstimate {
    HausdorffEstimate {
        estimate: directed_hausdorff(a, b).max(directed_hausdorff(b, a)),
        error_bound: a.mesh + b.mesh,
    }
}

/// An open metric ball.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: Element,
    pub radius: f64,
}

/// A finite union of open balls, or the whole group.
#[derive(Clone, Debug)]
pub enum Region {
    Whole,
    Balls(Vec<Ball>),
}

impl Region {
    pub fn ball(center: Element, radius: f64) -> Self {
        Region::Balls(vec![Ball { center, radius }])
    }

    /// `min over balls of d(x, center) − radius`; negative inside.
    fn signed_gap(&self, x: &Element) -> f64 {
        match self {
            Region::Whole => f64::NEG_INFINITY,
            Region::Balls(balls) => {
                balls.iter().map(|b| x.distance(&b.center) - b.radius).fold(f64::INFINITY, f64::min)
            }
        }
    }

    fn radii_positive(&self) -> bool {
        match self {
            Region::Whole => true,
            Region::Balls(balls) => balls.iter().all(|b| b.radius > 0.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VietorisNbhd {
    pub u0: Region,
    pub hits: Vec<Region>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VietorisCertificate {
    pub member: bool,
    /// A sample point outside `U₀`, when membership fails there.
    pub outside_u0: Option<usize>,
    /// For each `Uᵢ`, a sample point inside it.
    pub witnesses: Vec<Option<usize>>,
}

#[derive(Clone, Debug, Error, PartialEq)]
#[error("undecidable at mesh {mesh}: {reason}")]
pub struct Undecidable {
    pub mesh: f64,
    pub reason: String,
}

#[derive(Clone, Debug, Error, PartialEq)]
#[error("Vietoris neighbourhood has a nonpositive radius")]
pub struct InvalidNbhd;

/// Decides `K ∈ 𝒱(U₀, …, Uₙ)` from samples. Sample points belong to `K`,
/// and every point of `K` is within `K.mesh` of one; answers that depend on
/// the unseen points near a ball boundary are `Undecidable`.
pub fn vietoris_contains(
    k: &SampleSet,
    nbhd: &VietorisNbhd,
) -> Result<Result<VietorisCertificate, Undecidable>, InvalidNbhd> {
    if !nbhd.u0.radii_positive() || !nbhd.hits.iter().all(Region::radii_positive) {
        return Err(InvalidNbhd);
    }
    let mesh = k.mesh;
    let gaps: Vec<f64> = k.points.iter().map(|p| nbhd.u0.signed_gap(p)).collect();
    let outside_u0 = gaps.iter().position(|&g| g >= 0.0);
    let mut ambiguous: Option<String> = None;
    if outside_u0.is_none() && mesh > 0.0 {
        if let Some(i) = gaps.iter().position(|&g| g >= -mesh) {
            ambiguous = Some(format!("sample {i} is within mesh of the boundary of U0"));
        }
    }
    let mut witnesses = Vec::with_capacity(nbhd.hits.len());
    let mut missing = false;
    for (j, u) in nbhd.hits.iter().enumerate() {
        let hit_gaps: Vec<f64> = k.points.iter().map(|p| u.signed_gap(p)).collect();
        let w = hit_gaps.iter().position(|&g| g < 0.0);
        if w.is_none() {
            if mesh > 0.0 && hit_gaps.iter().any(|&g| g < mesh) {
                ambiguous.get_or_insert_with(|| format!("U{} is missed only by less than the mesh", j + 1));
            } else {
                missing = true;
            }
        }
        witnesses.push(w);
    }
    let member = outside_u0.is_none() && !missing;
    if !member && (outside_u0.is_some() || missing) {
        return Ok(Ok(VietorisCertificate { member: false, outside_u0, witnesses }));
    }
    match ambiguous {
        Some(reason) => Ok(Err(Undecidable { mesh, reason })),
        None => Ok(Ok(VietorisCertificate { member, outside_u0, witnesses })),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceRow {
    pub index: usize,
    pub n: Option<i64>,
    pub estimate: f64,
    pub error_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceReport {
    pub rows: Vec<SequenceRow>,
    /// Indices `i` where `Kᵢ₊₁` is certainly farther from `K` than `Kᵢ`.
    pub monotonicity_violations: Vec<usize>,
}

impl SequenceReport {
    /// Whether `estimate − error_bound` is strictly decreasing.
    pub fn lower_bounds_strictly_decrease(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].estimate - w[1].error_bound < w[0].estimate - w[0].error_bound)
    }

    /// Writes `index,n,estimate,error_bound`.
    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Hausdorff estimates `d_H(Kᵢ, K)`, with `ns[i]` as a label column.
pub fn converging_sequence_report(ks: &[SampleSet], ns: Option<&[i64]>, k: &SampleSet) -> SequenceReport {
    let rows: Vec<SequenceRow> = ks
        .iter()
        .enumerate()
        .map(|(index, ki)| {
            let h = hausdorff_distance(ki, k);
            SequenceRow { index, n: ns.and_then(|ns| ns.get(index).copied()), estimate: h.estimate, error_bound: h.error_bound }
        })
        .collect();
    let monotonicity_violations = rows
        .windows(2)
        .filter(|w| w[1].estimate - w[1].error_bound > w[0].estimate + w[0].error_bound)
        .map(|w| w[0].index)
        .collect();
    SequenceReport { rows, monotonicity_violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{SamplableGroup, TorusPoint};

    fn circle(ks: &[i64], n: i64) -> SampleSet {
        SampleSet::exact(ks.iter().map(|&k| Element::Torus(TorusPoint::grid(&[k], n))).collect())
    }

    #[test]
    fn two_point_distance() {
        let h = hausdorff_distance(&circle(&[0], 1), &circle(&[0, 1], 2));
        assert_eq!(h, HausdorffEstimate { estimate: 0.5, error_bound: 0.0 });
        let a = circle(&[0, 1, 3], 7);
        assert_eq!(hausdorff_distance(&a, &a).estimate, 0.0);
    }

    #[test]
    fn c4_against_the_circle() {
        let c4 = circle(&[0, 1, 2, 3], 4);
        let oracle = circle(&(0..10_000).collect::<Vec<_>>(), 10_000);
        assert!((hausdorff_distance(&c4, &oracle).estimate - 0.125).abs() < 1e-12);
        let mut last = f64::INFINITY;
        for eps in [0.2, 0.05, 0.01] {
            let net = SamplableGroup::Torus(1).eps_net(eps).unwrap();
            let h = hausdorff_distance(&c4, &net);
            assert!((h.estimate - 0.125).abs() <= h.error_bound);
            assert!(h.error_bound < last);
            last = h.error_bound;
        }
    }

    #[test]
    fn vietoris_examples() {
        let c2 = circle(&[0, 1], 2);
        let at = |k, n| Element::Torus(TorusPoint::grid(&[k], n));
        let nbhd = VietorisNbhd { u0: Region::Whole, hits: vec![Region::ball(at(1, 2), 0.1)] };
        let cert = vietoris_contains(&c2, &nbhd).unwrap().unwrap();
        assert!(cert.member);
        assert_eq!(cert.witnesses, vec![Some(1)]);
        let nbhd = VietorisNbhd { u0: Region::Whole, hits: vec![Region::ball(at(1, 4), 0.1)] };
        assert!(!vietoris_contains(&c2, &nbhd).unwrap().unwrap().member);
        let net = SamplableGroup::Torus(1).eps_net(0.01).unwrap();
        let nbhd = VietorisNbhd { u0: Region::ball(at(0, 1), 0.4), hits: vec![] };
        let cert = vietoris_contains(&net, &nbhd).unwrap().unwrap();
        assert!(!cert.member && cert.outside_u0.is_some());
    }

    #[test]
    fn boundary_cases_are_undecidable() {
        let net = SampleSet::new(vec![Element::Torus(TorusPoint::grid(&[0], 1))], 0.05);
        let at = |k, n| Element::Torus(TorusPoint::grid(&[k], n));
        let nbhd = VietorisNbhd { u0: Region::ball(at(0, 1), 0.03), hits: vec![] };
        assert!(vietoris_contains(&net, &nbhd).unwrap().is_err());
        let nbhd = VietorisNbhd { u0: Region::Whole, hits: vec![Region::ball(at(1, 10), 0.07)] };
        assert!(vietoris_contains(&net, &nbhd).unwrap().is_err());
        let bad = VietorisNbhd { u0: Region::ball(at(0, 1), 0.0), hits: vec![] };
        assert!(vietoris_contains(&net, &bad).is_err());
    }

    #[test]
    fn circle_sequence_report() {
        let ns = [2, 4, 8, 16];
        let ks: Vec<SampleSet> = ns.iter().map(|&n| circle(&(0..n).collect::<Vec<_>>(), n)).collect();
        let full = SamplableGroup::Torus(1).eps_net(1.0 / 64.0).unwrap();
        let report = converging_sequence_report(&ks, Some(&ns), &full);
        for (row, n) in report.rows.iter().zip(ns) {
            assert!((row.estimate - 1.0 / (2.0 * n as f64)).abs() <= row.error_bound);
        }
        assert!(report.monotonicity_violations.is_empty());
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("index,n,estimate,error_bound\n0,2,"));
        let constant = converging_sequence_report(&[full.clone(), full.clone()], None, &full);
        assert!(constant.rows.iter().all(|r| r.estimate <= 2.0 * full.mesh()));
    }
}
